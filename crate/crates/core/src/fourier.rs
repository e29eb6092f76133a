//! Fourier analysis of densities: `psi = sum_S psi_hat(S) chi_S`.

use serde::Serialize;

use crate::cube::{parity_f64, submasks, CoordSet, Subcube};
use crate::error::{Error, Result};
use crate::measure::{neumaier_sum, ExplicitMeasure, SampleSet};

/// Tolerance for identities between derived quantities.
pub const IDENTITY_TOL: f64 = 1e-9;

/// Unnormalized Walsh-Hadamard butterfly over a table of length `2^n`.
pub fn wht_in_place(data: &mut [f64]) {
    let len = data.len();
    assert!(len.is_power_of_two(), "length must be a power of two");
    let mut h = 1;
    while h < len {
        for block in data.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// All `2^n` Fourier coefficients, indexed by set mask.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    n: usize,
    coeffs: Vec<f64>,
}

impl Spectrum {
    /// `psi_hat(S) = E_x[psi(x) chi_S(x)]`, in `O(n 2^n)`.
    pub fn of(m: &ExplicitMeasure) -> Spectrum {
        let mut coeffs = m.density().to_vec();
        wht_in_place(&mut coeffs);
        let scale = 1.0 / coeffs.len() as f64;
        coeffs.iter_mut().for_each(|v| *v *= scale);
        Spectrum { n: m.dim(), coeffs }
    }

    pub fn from_coeffs(n: usize, coeffs: Vec<f64>) -> Result<Spectrum> {
        if coeffs.len() != 1usize << n {
            return Err(Error::DimensionMismatch { left: 1usize << n, right: coeffs.len() });
        }
        Ok(Spectrum { n, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, mask: u64) -> f64 {
        self.coeffs[mask as usize]
    }

    /// The density `sum_S psi_hat(S) chi_S`.
    pub fn inverse(&self) -> Vec<f64> {
        let mut d = self.coeffs.clone();
        wht_in_place(&mut d);
        d
    }

    /// `sum_S psi_hat(S)^2`, which equals `E[psi^2]`.
    pub fn total_weight(&self) -> f64 {
        neumaier_sum(self.coeffs.iter().map(|c| c * c))
    }

    /// `W^{<=k}`: squared weight on sets of size at most `k`, including the empty set.
    pub fn level_weight(&self, k: usize) -> f64 {
        neumaier_sum(
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(s, _)| (s.count_ones() as usize) <= k)
                .map(|(_, c)| c * c),
        )
    }

    /// `W^{<=k}(psi, J)`: squared weight on sets with at most `k` elements outside `J`.
    pub fn level_weight_excl(&self, k: usize, j: &CoordSet) -> f64 {
        let outside = !j.mask();
        neumaier_sum(
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(s, _)| ((*s as u64 & outside).count_ones() as usize) <= k)
                .map(|(_, c)| c * c),
        )
    }

    /// `sum_{emptyset != S subset K} psi_hat(S) chi_S(y)`, the skew of `(K, y)`.
    pub fn skew(&self, c: &Subcube) -> f64 {
        let y = c.assignment();
        neumaier_sum(submasks(c.fixed_mask()).skip(1).map(|s| self.coeffs[s as usize] * parity_f64(s & y)))
    }

    /// `<psi, mu_C> = sum_{S subset K} psi_hat(S) chi_S(y)`.
    pub fn inner_cube(&self, c: &Subcube) -> f64 {
        1.0 + self.skew(c)
    }

    /// Sets with `|psi_hat(S)| >= min_abs`, ordered by size then mask.
    pub fn dump(&self, min_abs: f64) -> Vec<(u64, f64)> {
        let mut out: Vec<(u64, f64)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.abs() >= min_abs)
            .map(|(s, &c)| (s as u64, c))
            .collect();
        out.sort_by_key(|&(s, _)| (s.count_ones(), s));
        out
    }
}

/// Spectrum dump line: `<mask-hex> <value>`.
pub fn format_coeff_line(mask: u64, value: f64) -> String {
    format!("{mask:#x} {value}")
}

/// `psi_hat(S)` of the restriction to `C = (J, z)`, read off the spectrum of `psi`:
/// `sum_{T subset J} psi_hat(S u T) chi_T(z) / ip`.
pub fn restricted_coeff(spec: &Spectrum, c: &Subcube, s: u64, ip: f64) -> Result<f64> {
    if ip <= 0.0 {
        return Err(Error::ZeroMass);
    }
    if s & c.fixed_mask() != 0 {
        return Err(Error::Overlap { set: s, fixed: c.fixed_mask() });
    }
    let z = c.assignment();
    let sum = neumaier_sum(submasks(c.fixed_mask()).map(|t| spec.coeffs[(s | t) as usize] * parity_f64(t & z)));
    Ok(sum / ip)
}

/// `e^2 (ln(e t))^k`, the level-`k` weight bound for a measure with `inorm` `t`.
pub fn hypercontractive_bound(t: f64, k: usize) -> Result<f64> {
    if !(t >= 1.0) {
        return Err(Error::InvalidParameter(format!("inorm bound {t} below 1")));
    }
    let e = std::f64::consts::E;
    Ok(e * e * (1.0 + t.ln()).powi(k as i32))
}

/// Where a coefficient value came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CoeffSource {
    Exact,
    Sampled,
}

/// One Fourier coefficient, with its error bar when estimated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoeffEntry {
    pub set: u64,
    pub value: f64,
    pub source: CoeffSource,
    pub sample_error: f64,
}

impl CoeffEntry {
    pub fn exact(set: u64, value: f64) -> Self {
        CoeffEntry { set, value, source: CoeffSource::Exact, sample_error: 0.0 }
    }
}

/// Default failure probability `n^{-2k}` for coefficient estimates.
pub fn default_delta(n: usize, k: usize) -> f64 {
    (n.max(2) as f64).powi(-2 * k.max(1) as i32)
}

/// Mean of `chi_S` over the samples; the error is the Hoeffding half-width
/// `sqrt(ln(2/delta) / 2m)` for the range `[-1, 1]`.
pub fn coeff_estimate(samples: &SampleSet, s: &CoordSet, delta: f64) -> Result<CoeffEntry> {
    if s.dim() != samples.dim() {
        return Err(Error::DimensionMismatch { left: samples.dim(), right: s.dim() });
    }
    let m = samples.len();
    let odd = samples.points().iter().filter(|&&x| (x & s.mask()).count_ones() & 1 == 1).count();
    let value = (m - 2 * odd) as f64 / m as f64;
    let sample_error = if s.is_empty() { 0.0 } else { ((2.0 / delta).ln() / (2.0 * m as f64)).sqrt() };
    Ok(CoeffEntry { set: s.mask(), value, source: CoeffSource::Sampled, sample_error })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::cube::{enumerate_subcubes, full_mask};
    use crate::rng::stream;
    use proptest::prelude::*;
    use rand::Rng;

    pub(crate) fn random_measure(n: usize, seed: u64) -> ExplicitMeasure {
        let mut rng = stream(seed, "fourier-test", 0);
        let mut w: Vec<f64> = (0..1 << n).map(|_| if rng.gen_bool(0.4) { 0.0 } else { rng.gen::<f64>() }).collect();
        w[0] += 0.01;
        ExplicitMeasure::from_weights(n, w).unwrap()
    }

    /// `T_rho`: scales `psi_hat(S)` by `rho^{|S|}`.
    fn noise(spec: &Spectrum, rho: f64) -> Vec<f64> {
        let scaled: Vec<f64> =
            spec.coeffs().iter().enumerate().map(|(s, c)| c * rho.powi(s.count_ones() as i32)).collect();
        Spectrum::from_coeffs(spec.dim(), scaled).unwrap().inverse()
    }

    fn p_norm(f: &[f64], p: f64) -> f64 {
        (f.iter().map(|v| v.abs().powf(p)).sum::<f64>() / f.len() as f64).powf(1.0 / p)
    }

    #[test]
    fn uniform_spectrum() {
        let s = Spectrum::of(&ExplicitMeasure::uniform(5).unwrap());
        assert_eq!(s.coeff(0), 1.0);
        assert!(s.coeffs()[1..].iter().all(|&c| c == 0.0));
        for k in 0..=5 {
            assert_eq!(s.level_weight(k), 1.0);
        }
    }

    #[test]
    fn subcube_uniform_spectrum() {
        let c = Subcube::new(5, 0b01101, 0b00100).unwrap();
        let d: Vec<f64> = (0..32u64).map(|x| if c.contains_bits(x) { 8.0 } else { 0.0 }).collect();
        let s = Spectrum::of(&ExplicitMeasure::new(5, d).unwrap());
        for t in 0..32u64 {
            let want = if t & !c.fixed_mask() == 0 { parity_f64(t & c.assignment()) } else { 0.0 };
            assert!((s.coeff(t) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn skew_of_all_ones_cube() {
        let d: Vec<f64> = (0..16u64).map(|x| if x == 0 { 16.0 } else { 0.0 }).collect();
        let s = Spectrum::of(&ExplicitMeasure::new(4, d).unwrap());
        let c: Subcube = "++**".parse().unwrap();
        assert!((s.skew(&c) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn spectral_skew_matches_summation() {
        for seed in 0..5 {
            let psi = random_measure(8, seed);
            let s = Spectrum::of(&psi);
            assert!((s.coeff(0) - 1.0).abs() < 1e-12);
            for c in enumerate_subcubes(8, 3).unwrap() {
                assert!((s.skew(&c) - psi.skew(&c)).abs() < IDENTITY_TOL);
            }
        }
    }

    #[test]
    fn restricted_coeff_examples() {
        let psi = random_measure(6, 1);
        let s = Spectrum::of(&psi);
        let full = Subcube::full(6).unwrap();
        for t in 0..64 {
            assert_eq!(restricted_coeff(&s, &full, t, 1.0).unwrap(), s.coeff(t));
        }
        let u = Spectrum::of(&ExplicitMeasure::uniform(6).unwrap());
        let c: Subcube = "+-****".parse().unwrap();
        assert_eq!(restricted_coeff(&u, &c, 0b100, 1.0).unwrap(), 0.0);
        assert!(matches!(restricted_coeff(&u, &c, 0b1, 1.0), Err(Error::Overlap { .. })));
        assert!(matches!(restricted_coeff(&u, &c, 0b100, 0.0), Err(Error::ZeroMass)));
    }

    #[test]
    fn restricted_coeff_matches_restriction() {
        for seed in 0..4 {
            let psi = random_measure(8, 10 + seed);
            let spec = Spectrum::of(&psi);
            for c in enumerate_subcubes(8, 2).unwrap().filter(|c| c.codim() == 2) {
                let ip = psi.inner_cube(&c);
                if ip <= 0.0 {
                    continue;
                }
                let r = psi.restrict(&c).unwrap();
                let local = Spectrum::of(r.measure().unwrap());
                for s_local in 0..64u64 {
                    let s = r.lift_set(s_local);
                    let v = restricted_coeff(&spec, &c, s, ip).unwrap();
                    assert!((v - local.coeff(s_local)).abs() < IDENTITY_TOL);
                }
            }
        }
    }

    #[test]
    fn level_weight_examples() {
        let psi = random_measure(7, 4);
        let s = Spectrum::of(&psi);
        let e2: f64 = psi.density().iter().map(|v| v * v).sum::<f64>() / 128.0;
        assert!((s.level_weight(7) - e2).abs() < 1e-9);
        assert!((s.total_weight() - e2).abs() < 1e-9);
        let j = CoordSet::from_indices(7, &[1, 5]).unwrap();
        let t = psi.inorm();
        for k in 0..=4 {
            assert!(s.level_weight(k) <= hypercontractive_bound(t, k).unwrap());
            assert!(s.level_weight_excl(k, &j) <= 4.0 * hypercontractive_bound(t, k).unwrap());
            assert!(s.level_weight_excl(k, &j) >= s.level_weight(k));
        }
        assert_eq!(s.level_weight_excl(0, &CoordSet::empty(7).unwrap()), s.coeff(0).powi(2));
    }

    #[test]
    fn bound_edge_cases() {
        let e2 = std::f64::consts::E.powi(2);
        assert!((hypercontractive_bound(1.0, 5).unwrap() - e2).abs() < 1e-12);
        assert!(hypercontractive_bound(0.5, 1).is_err());
    }

    #[test]
    fn dump_order() {
        let d: Vec<f64> = (0..8u64).map(|x| if x == 0 { 8.0 } else { 0.0 }).collect();
        let s = Spectrum::of(&ExplicitMeasure::new(3, d).unwrap());
        let masks: Vec<u64> = s.dump(0.5).into_iter().map(|(m, _)| m).collect();
        assert_eq!(masks, vec![0, 1, 2, 4, 3, 5, 6, 7]);
        assert_eq!(format_coeff_line(5, 1.0), "0x5 1");
    }

    #[test]
    fn coefficient_estimates() {
        let s = SampleSet::new(4, vec![0; 50], 0).unwrap();
        let e = coeff_estimate(&s, &CoordSet::empty(4).unwrap(), 0.1).unwrap();
        assert_eq!((e.value, e.sample_error), (1.0, 0.0));
        let e = coeff_estimate(&s, &CoordSet::new(4, 0b1011).unwrap(), 0.1).unwrap();
        assert_eq!(e.value, 1.0);
        let s = SampleSet::new(2, vec![0b01, 0b10, 0b11, 0b00], 0).unwrap();
        let e = coeff_estimate(&s, &CoordSet::new(2, 0b01).unwrap(), 0.1).unwrap();
        assert_eq!(e.value, 0.0);
    }

    proptest! {
        #[test]
        fn transform_round_trip_and_parseval(seed in 0u64..1000, n in 1usize..=10) {
            let psi = random_measure(n, seed);
            let s = Spectrum::of(&psi);
            for (a, b) in s.inverse().iter().zip(psi.density()) {
                prop_assert!((a - b).abs() < 1e-10);
            }
            let e2: f64 = psi.density().iter().map(|v| v * v).sum::<f64>() / (1u64 << n) as f64;
            prop_assert!((s.total_weight() - e2).abs() < 1e-9);
        }

        #[test]
        fn marginal_keeps_coefficients(seed in 0u64..1000, n in 2usize..=10, pm in 1u64..1024) {
            let psi = random_measure(n, seed);
            let pmask = pm & full_mask(n);
            prop_assume!(pmask != 0);
            let p = CoordSet::new(n, pmask).unwrap();
            let marg = Spectrum::of(&psi.marginal(&p).unwrap());
            let full = Spectrum::of(&psi);
            for local in 0..1u64 << p.len() {
                let s = crate::cube::expand(local, pmask);
                prop_assert!((marg.coeff(local) - full.coeff(s)).abs() < 1e-10);
            }
        }

        #[test]
        fn noise_operator_is_hypercontractive(seed in 0u64..1000, n in 1usize..=10, rho in 0.0f64..1.0) {
            let psi = random_measure(n, seed);
            let s = Spectrum::of(&psi);
            let lhs = p_norm(&noise(&s, rho), 2.0);
            let rhs = p_norm(psi.density(), 1.0 + rho * rho);
            prop_assert!(lhs <= rhs * (1.0 + 1e-12));
        }
    }
}
