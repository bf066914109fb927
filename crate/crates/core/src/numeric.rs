//! Small numeric helpers shared across modules.

/// Neumaier's variant of Kahan summation.
///
/// Unlike plain Kahan it stays accurate when an added term is larger in
/// magnitude than the running sum, which happens constantly for ±1/n sums.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
    abs_total: f64,
    terms: u64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
        self.abs_total += v.abs();
        self.terms += 1;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// A conservative bound on the absolute rounding error of [`value`](Self::value).
    pub fn error_bound(&self) -> f64 {
        let eps = f64::EPSILON;
        2.0 * eps * self.value().abs() + (self.terms as f64) * eps * eps * self.abs_total
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for v in iter {
            s.add(v);
        }
        s
    }
}

/// SplitMix64 finalizer (Steele, Lea, Flood). Bijective on `u64`.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for trial `index` of a run keyed by `master`.
#[inline]
pub fn derive_seed(master: u64, index: u64) -> u64 {
    mix64(mix64(master) ^ mix64(index ^ 0x5851_f42d_4c95_7f2d))
}

/// Formats a real with 17 significant digits, switching to exponent
/// notation for very large or very small magnitudes. The output is always
/// a valid JSON number for finite input.
pub fn fmt_real(v: f64) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "NaN".to_string()
        } else if v > 0.0 {
            "Infinity".to_string()
        } else {
            "-Infinity".to_string()
        };
    }
    if v == 0.0 {
        return "0.0".to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..17).contains(&exp) {
        let prec = (16 - exp).max(1) as usize;
        format!("{v:.prec$}")
    } else {
        format!("{v:.16e}")
    }
}

/// `⌊√n⌋` exactly.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).map_or(true, |sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

pub fn is_square(n: u64) -> bool {
    let r = isqrt(n);
    r * r == n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_beats_naive_on_cancellation() {
        let terms = [1e16, 1.0, -1e16, 1.0];
        let s: CompensatedSum = terms.iter().copied().collect();
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn fmt_real_has_seventeen_digits() {
        assert_eq!(fmt_real(0.5), "0.50000000000000000");
        assert_eq!(fmt_real(34.0), "34.000000000000000");
        let digits = fmt_real(1.0 - 2f64.ln()).chars().filter(|c| c.is_ascii_digit()).count();
        assert_eq!(digits, 18); // leading zero plus 17 significant
        let back: f64 = fmt_real(std::f64::consts::PI).parse().unwrap();
        assert_eq!(back, std::f64::consts::PI);
        let tiny: f64 = fmt_real(1.234e-30).parse().unwrap();
        assert_eq!(tiny, 1.234e-30);
    }

    #[test]
    fn isqrt_edges() {
        assert_eq!(isqrt(0), 0);
        assert_eq!(isqrt(15), 3);
        assert_eq!(isqrt(16), 4);
        assert_eq!(isqrt(u64::MAX), 4_294_967_295);
        assert!(is_square(1 << 40));
        assert!(!is_square((1 << 40) + 1));
    }
}
