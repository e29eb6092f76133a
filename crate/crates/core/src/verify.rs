//! Property suites run by `skewscope verify`: each check reports the
//! largest observed deviation against its tolerance.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use serde::Serialize;

use crate::cube::{enumerate_subcubes, masks_up_to, CoordSet, Subcube};
use crate::enumerate::{
    brute_force_from_table, conditional_skew, find_skewed, SkewQuery, SkewTable, SpectrumCoeffs,
};
use crate::error::{Error, Result};
use crate::fourier::{hypercontractive_bound, Spectrum};
use crate::generators::{random_sparse, subcube_uniform, BchSpec, NoisyParity, Tribes};
use crate::heavy::{ffc, CorrBackend, FfcParams};
use crate::measure::{draw_samples, ExplicitMeasure, Sign};
use crate::rng::stream;

/// Tolerance of the algebraic identities.
pub const IDENTITY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Identities,
    Generators,
    OracleEquivalence,
    LevelK,
    FfcStat,
}

impl Suite {
    pub const ALL: [Suite; 5] =
        [Suite::Identities, Suite::Generators, Suite::OracleEquivalence, Suite::LevelK, Suite::FfcStat];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Generators => "generators",
            Suite::OracleEquivalence => "oracle-equivalence",
            Suite::LevelK => "level-k",
            Suite::FfcStat => "ffc-stat",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Largest deviation or observed rate, depending on the check.
    pub observed: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    fn within(name: impl Into<String>, deviation: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed: deviation <= tolerance, observed: deviation, tolerance, detail: detail.into() }
    }

    fn flag(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, observed: if passed { 0.0 } else { 1.0 }, tolerance: 0.0, detail: detail.into() }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} observed={:.3e} tol={:.1e} {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.observed,
            self.tolerance,
            self.detail
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Knobs shared by the suites; unused fields are ignored.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct VerifyOptions {
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub trials: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 0, n: 10, k: 3, trials: 20 }
    }
}

/// The generator corpus: subcube-uniform, tribes, dual-BCH, noisy parity
/// and random sparse measures, all with `n <= 15`.
pub fn corpus(seed: u64) -> Result<Vec<(String, ExplicitMeasure)>> {
    let mut out = Vec::new();
    for (n, fixed, a) in [(8, 0b111u64, 0b010u64), (12, 0xf0, 0x50)] {
        let c = Subcube::new(n, fixed, a)?;
        out.push((format!("subcube {c}"), subcube_uniform(&c)?));
    }
    for (k, t) in [(3, 3), (3, 4), (2, 5)] {
        out.push((format!("tribes k={k} t={t}"), Tribes::new(k, t)?.explicit()?));
    }
    for (l, e) in [(3, 1), (4, 1)] {
        out.push((format!("dual-bch l={l} e={e}"), BchSpec::new(l, e)?.dual_measure()?));
    }
    let np = NoisyParity::new(11, &CoordSet::from_indices(11, &[0, 4, 9])?, 0.1)?;
    out.push(("noisy-parity n=11".into(), np.explicit()?));
    for (i, (n, s)) in [(8, 8), (10, 32), (12, 256), (14, 64)].into_iter().enumerate() {
        out.push((format!("sparse n={n} support={s}"), random_sparse(n, s, seed.wrapping_add(i as u64))?));
    }
    Ok(out)
}

fn random_cube(n: usize, max_codim: usize, rng: &mut impl Rng) -> Subcube {
    let codim = rng.gen_range(0..=max_codim.min(n));
    let fixed = index::sample(rng, n, codim).iter().fold(0u64, |m, i| m | 1 << i);
    Subcube::from_raw(n, fixed, rng.gen::<u64>() & fixed)
}

/// Product rule, zero sum over assignments, partition averaging and the
/// conditional-skew bounds, over the corpus.
pub fn identities(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for (name, m) in corpus(opts.seed)? {
        let n = m.dim();
        let mut rng = stream(opts.seed, "verify-identities", n as u64);
        let (mut prod, mut zero, mut avg) = (0f64, 0f64, 0f64);
        for _ in 0..100 {
            let d = random_cube(n, 3, &mut rng);
            let extra = index::sample(&mut rng, n - d.codim(), 2.min(n - d.codim()))
                .iter()
                .fold(0u64, |acc, i| acc | 1 << crate::cube::BitIter(d.free_mask()).nth(i).expect("free coordinate"));
            let children = d.partition_children(&CoordSet::new(n, extra)?)?;
            let mean = children.iter().map(|c| m.skew(c)).sum::<f64>() / children.len() as f64;
            avg = avg.max((mean - m.skew(&d)).abs());
            if m.inner_cube(&d) > 0.0 {
                let r = m.restrict(&d)?;
                if let Some(rm) = r.measure() {
                    for c in &children {
                        let local = r.localize(c)?;
                        prod = prod.max((rm.inner_cube(&local) - m.inner_cube(c) / m.inner_cube(&d)).abs());
                    }
                }
            }
        }
        for mask in masks_up_to(n, 2) {
            let children = Subcube::full(n)?.partition_children(&CoordSet::new(n, mask)?)?;
            zero = zero.max(children.iter().map(|c| m.skew(c)).sum::<f64>().abs());
        }
        checks.push(Check::within(format!("{name}: product rule"), prod, IDENTITY_TOL, ""));
        checks.push(Check::within(format!("{name}: zero sum over assignments"), zero, IDENTITY_TOL, ""));
        checks.push(Check::within(format!("{name}: partition averaging"), avg, IDENTITY_TOL, ""));

        let table = SkewTable::of(&m, 3.min(n))?;
        let mut worst = f64::NEG_INFINITY;
        let mut cubes = 0;
        for sign in [Sign::Positive, Sign::Negative] {
            for (gamma, eps) in [(0.25, 0.5), (0.5, 1.0), (1.0, 0.25), (1.0, 1.0)] {
                let q = SkewQuery::new(3.min(n), gamma, eps, sign)?;
                for r in brute_force_from_table(&table, &q) {
                    cubes += 1;
                    for p in r.subcube.parents() {
                        let cs = conditional_skew(r.skew, table.get(&p).expect("parent in table"))?;
                        worst = worst.max(q.conditional_skew_bound() - sign.factor() * cs);
                    }
                }
            }
        }
        checks.push(Check::within(
            format!("{name}: conditional skew"),
            worst.max(0.0),
            IDENTITY_TOL,
            format!("{cubes} minimal cubes"),
        ));
    }
    Ok(SuiteReport { suite: Suite::Identities, checks })
}

/// Structural facts about the generators.
pub fn generators(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for (k, t) in [(3, 4), (2, 5)] {
        let tr = Tribes::new(k, t)?;
        let m = tr.explicit()?;
        let mut dev = (m.inorm() - 2f64.powi(t as i32)).abs();
        for c in tr.zero_certificates() {
            for p in c.parents() {
                dev = dev.max((m.skew(&p) + p.codim() as f64 / k as f64).abs());
            }
        }
        checks.push(Check::within(format!("tribes k={k} t={t}: parent skews and inorm"), dev, 1e-12, ""));
    }

    let bch = BchSpec::new(4, 1)?;
    let m = bch.dual_measure()?;
    let spec = Spectrum::of(&m);
    let code: std::collections::HashSet<u64> = bch.codewords()?.into_iter().collect();
    let mut dev = 0f64;
    for (s, &c) in spec.coeffs().iter().enumerate() {
        let want = if code.contains(&(s as u64)) { 1.0 } else { 0.0 };
        dev = dev.max((c - want).abs());
    }
    checks.push(Check::within("dual-bch l=4 e=1: spectrum is the code indicator", dev, 1e-9, ""));
    let mut skew = 0f64;
    for c in enumerate_subcubes(bch.len(), 3)? {
        skew = skew.max(m.skew(&c).abs());
    }
    checks.push(Check::within("dual-bch l=4 e=1: codim <= 3 skews vanish", skew, 1e-9, ""));

    let np = NoisyParity::new(10, &CoordSet::from_indices(10, &[1, 2, 7])?, 0.1)?;
    let m = np.explicit()?;
    let (pos, neg) = np.planted_cubes();
    let mut dev = 0f64;
    for c in &pos {
        dev = dev.max((m.skew(c) - 0.8).abs());
    }
    for c in &neg {
        dev = dev.max((m.skew(c) + 0.8).abs());
    }
    checks.push(Check::within("noisy parity: planted skews +-0.8", dev, 1e-12, ""));

    let samples = 40_000;
    for (name, m) in [
        ("tribes k=3 t=3", Tribes::new(3, 3)?.explicit()?),
        ("sparse n=8", random_sparse(8, 20, opts.seed)?),
    ] {
        let s = draw_samples(&m.sampler(), samples, opts.seed)?;
        let mut worst = 0f64;
        for c in enumerate_subcubes(m.dim(), 2)? {
            let p = m.inner_cube(&c) / (1u64 << c.codim()) as f64;
            let sd = (p * (1.0 - p) / samples as f64).sqrt().max(1e-12);
            let got = s.count_in(&c) as f64 / samples as f64;
            worst = worst.max((got - p).abs() / sd);
        }
        checks.push(Check::within(format!("{name}: sampler marginals (sigmas)"), worst, 5.0, ""));
    }
    Ok(SuiteReport { suite: Suite::Generators, checks })
}

/// Exact enumerators against the brute-force oracle on random sparse measures.
pub fn oracle_equivalence(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let supports = [8usize, 32, 256];
    for trial in 0..opts.trials {
        let support = supports[trial % 3].min(1 << opts.n);
        let m = random_sparse(opts.n, support, opts.seed.wrapping_add(trial as u64))?;
        let spec = Spectrum::of(&m);
        let provider = SpectrumCoeffs::exact(spec.clone());
        let table = SkewTable::of(&m, opts.k.min(opts.n))?;
        let mut combos = 0;
        let mut bad = Vec::new();
        for sign in [Sign::Positive, Sign::Negative] {
            for gamma in [0.25, 0.5, 1.0, 3.0] {
                for eps in [0.25, 0.5, 1.0] {
                    let Ok(q) = SkewQuery::new(opts.k, gamma, eps, sign) else { continue };
                    combos += 1;
                    let got = find_skewed(&spec, &provider, &q)?;
                    let want = brute_force_from_table(&table, &q);
                    let same = got.reports.len() == want.len()
                        && got.reports.iter().zip(&want).all(|(a, b)| a.subcube == b.subcube);
                    if !same {
                        bad.push(format!("{sign} gamma={gamma} eps={eps}"));
                    }
                }
            }
        }
        checks.push(Check::flag(
            format!("trial {trial}: n={} support={support}", opts.n),
            bad.is_empty(),
            if bad.is_empty() { format!("{combos} queries agree") } else { bad.join("; ") },
        ));
    }
    Ok(SuiteReport { suite: Suite::OracleEquivalence, checks })
}

/// Level-`k` weight against `e^2 (ln(e inorm))^k`, with and without a free set `J`.
pub fn level_k(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for (name, m) in corpus(opts.seed)? {
        let n = m.dim();
        let spec = Spectrum::of(&m);
        let t = m.inorm();
        let mut ratio = 0f64;
        for k in 1..=4 {
            ratio = ratio.max(spec.level_weight(k) / hypercontractive_bound(t, k)?);
        }
        let mut rng = stream(opts.seed, "verify-level-k", n as u64);
        let mut ratio_j = 0f64;
        for _ in 0..20 {
            let size = rng.gen_range(0..=3.min(n));
            let j = index::sample(&mut rng, n, size).iter().fold(0u64, |acc, i| acc | 1 << i);
            let j = CoordSet::new(n, j)?;
            for k in 1..=4 {
                let bound = 2f64.powi(j.len() as i32) * hypercontractive_bound(t, k)?;
                ratio_j = ratio_j.max(spec.level_weight_excl(k, &j) / bound);
            }
        }
        let second_moment = m.density().iter().map(|v| v * v).sum::<f64>() / (1u64 << n) as f64;
        let parseval = (spec.total_weight() - second_moment).abs();
        checks.push(Check::within(format!("{name}: W<=k / bound"), ratio, 1.0, format!("inorm={t}")));
        checks.push(Check::within(format!("{name}: W<=k(J) / bound"), ratio_j, 1.0, "20 random J"));
        checks.push(Check::within(format!("{name}: Parseval"), parseval, 1e-9, ""));
    }
    Ok(SuiteReport { suite: Suite::LevelK, checks })
}

/// Recovery rate of the correlated-pair search on noisy parity with a
/// random 3-element secret.
pub fn ffc_stat(opts: &VerifyOptions) -> Result<SuiteReport> {
    let n = opts.n;
    let mut hits = 0;
    let mut spurious = 0;
    for trial in 0..opts.trials {
        let seed = opts.seed.wrapping_add(trial as u64);
        let mut rng = stream(seed, "verify-ffc-secret", 0);
        let secret = CoordSet::from_indices(n, &index::sample(&mut rng, n, 3).into_vec())?;
        let np = NoisyParity::new(n, &secret, 0.1)?;
        let params = FfcParams::new(n + 1, 4, 0.5, 0.5, seed)?;
        let s = draw_samples(&np, params.d + params.filter_samples(), seed)?;
        let out = ffc(&s, &params, CorrBackend::Pairwise)?;
        if out.list.contains(np.support_set()) {
            hits += 1;
        }
        spurious += out
            .list
            .entries
            .iter()
            .filter(|e| e.value.abs() < 0.75 * params.rho || !(e.set == 0 || e.set == np.support_set()))
            .count();
    }
    let rate = hits as f64 / opts.trials.max(1) as f64;
    let checks = vec![
        Check {
            name: format!("noisy parity n={n}: secret recovered"),
            passed: rate >= 0.95,
            observed: rate,
            tolerance: 0.95,
            detail: format!("{hits}/{} trials", opts.trials),
        },
        Check::flag("every reported set is a true heavy set at 3rho/4", spurious == 0, format!("{spurious} spurious")),
    ];
    Ok(SuiteReport { suite: Suite::FfcStat, checks })
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<SuiteReport> {
    match suite {
        Suite::Identities => identities(opts),
        Suite::Generators => generators(opts),
        Suite::OracleEquivalence => oracle_equivalence(opts),
        Suite::LevelK => level_k(opts),
        Suite::FfcStat => ffc_stat(opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suites_pass() {
        let opts = VerifyOptions { seed: 1, n: 8, k: 3, trials: 3 };
        for s in [Suite::Identities, Suite::LevelK, Suite::OracleEquivalence] {
            let r = run_suite(s, &opts).unwrap();
            for c in &r.checks {
                assert!(c.passed, "{s}: {c}");
            }
        }
    }
}
