//! Bandit instances: per-arm reward distributions, the optimal arm and gaps.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Normal, Triangular};

use crate::{Error, Result};

/// Distribution family tag of an arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArmKind {
    Gaussian,
    Bernoulli,
    Triangular,
    Constant,
}

impl ArmKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ArmKind::Gaussian => "gaussian",
            ArmKind::Bernoulli => "bernoulli",
            ArmKind::Triangular => "triangular",
            ArmKind::Constant => "constant",
        }
    }
}

impl fmt::Display for ArmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ArmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(ArmKind::Gaussian),
            "bernoulli" => Ok(ArmKind::Bernoulli),
            "triangular" | "bounded-triangular" => Ok(ArmKind::Triangular),
            "constant" => Ok(ArmKind::Constant),
            other => Err(Error::config(
                "kind",
                format!("unsupported arm kind `{other}` (expected gaussian, bernoulli, triangular or constant)"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Dist {
    Gaussian { mean: f64, variance: f64 },
    Bernoulli { p: f64 },
    Triangular { low: f64, high: f64, mode: f64 },
    Constant { value: f64 },
}

/// Reward distribution of one arm. Always sub-Gaussian; the variance proxy
/// is the Gaussian variance, `(b-a)^2/4` for bounded kinds and 0 for constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmSpec {
    dist: Dist,
}

fn finite(key: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::config(key, format!("{v} is not a finite number")))
    }
}

impl ArmSpec {
    pub fn gaussian(mean: f64, variance: f64) -> Result<Self> {
        finite("mean", mean)?;
        if !(finite("variance", variance)? >= 0.0) {
            return Err(Error::config("variance", format!("{variance} is negative")));
        }
        Ok(Self {
            dist: Dist::Gaussian { mean, variance },
        })
    }

    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        Ok(Self {
            dist: Dist::Bernoulli { p },
        })
    }

    /// Triangular distribution on `[low, high]` peaking at `mode`.
    pub fn triangular(low: f64, high: f64, mode: f64) -> Result<Self> {
        finite("low", low)?;
        finite("high", high)?;
        finite("mode", mode)?;
        if high < low {
            return Err(Error::InvalidInterval { a: low, b: high });
        }
        if !(low..=high).contains(&mode) {
            return Err(Error::config(
                "mode",
                format!("{mode} outside support [{low}, {high}]"),
            ));
        }
        Ok(Self {
            dist: Dist::Triangular { low, high, mode },
        })
    }

    pub fn constant(value: f64) -> Result<Self> {
        finite("mean", value)?;
        Ok(Self {
            dist: Dist::Constant { value },
        })
    }

    pub fn kind(&self) -> ArmKind {
        match self.dist {
            Dist::Gaussian { .. } => ArmKind::Gaussian,
            Dist::Bernoulli { .. } => ArmKind::Bernoulli,
            Dist::Triangular { .. } => ArmKind::Triangular,
            Dist::Constant { .. } => ArmKind::Constant,
        }
    }

    pub fn mean(&self) -> f64 {
        match self.dist {
            Dist::Gaussian { mean, .. } => mean,
            Dist::Bernoulli { p } => p,
            Dist::Triangular { low, high, mode } => (low + high + mode) / 3.0,
            Dist::Constant { value } => value,
        }
    }

    pub fn variance_proxy(&self) -> f64 {
        match self.dist {
            Dist::Gaussian { variance, .. } => variance,
            Dist::Constant { .. } => 0.0,
            _ => {
                let (a, b) = self.support().expect("bounded kind");
                (b - a) * (b - a) / 4.0
            }
        }
    }

    /// Square root of the variance proxy; the scale used by the UCB index.
    pub fn sigma(&self) -> f64 {
        self.variance_proxy().sqrt()
    }

    /// `[a, b]` for bounded kinds.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self.dist {
            Dist::Bernoulli { .. } => Some((0.0, 1.0)),
            Dist::Triangular { low, high, .. } => Some((low, high)),
            _ => None,
        }
    }

    /// Peak of a triangular arm.
    pub fn mode(&self) -> Option<f64> {
        match self.dist {
            Dist::Triangular { mode, .. } => Some(mode),
            _ => None,
        }
    }
}

/// Draws one reward from `arm` using `rng`.
pub fn sample_reward<R: Rng + ?Sized>(arm: &ArmSpec, rng: &mut R) -> f64 {
    match arm.dist {
        Dist::Gaussian { mean, variance } => Normal::new(mean, variance.sqrt())
            .expect("validated at construction")
            .sample(rng),
        Dist::Bernoulli { p } => {
            if rng.random::<f64>() < p {
                1.0
            } else {
                0.0
            }
        }
        Dist::Triangular { low, high, mode } => {
            if low == high {
                low
            } else {
                Triangular::new(low, high, mode)
                    .expect("validated at construction")
                    .sample(rng)
            }
        }
        Dist::Constant { value } => value,
    }
}

/// Variance proxy of a random variable bounded in `[a, b]`.
pub fn variance_proxy_of_bounded(a: f64, b: f64) -> Result<f64> {
    if !(b >= a) {
        return Err(Error::InvalidInterval { a, b });
    }
    Ok((b - a) * (b - a) / 4.0)
}

/// Gap of every arm to the best mean.
pub fn gaps(arms: &[ArmSpec]) -> Result<Vec<f64>> {
    let best = arms
        .iter()
        .map(ArmSpec::mean)
        .fold(None, |acc: Option<f64>, m| {
            Some(acc.map_or(m, |a| a.max(m)))
        })
        .ok_or_else(|| Error::config("arms", "bandit instance has no arms"))?;
    Ok(arms.iter().map(|a| best - a.mean()).collect())
}

/// An ordered set of arms shared by every agent.
#[derive(Debug, Clone, PartialEq)]
pub struct BanditInstance {
    arms: Vec<ArmSpec>,
    optimal: usize,
    gaps: Vec<f64>,
}

impl BanditInstance {
    pub fn new(arms: Vec<ArmSpec>) -> Result<Self> {
        let gaps = gaps(&arms)?;
        let optimal = gaps
            .iter()
            .position(|&g| g == 0.0)
            .expect("the best arm has zero gap");
        Ok(Self {
            arms,
            optimal,
            gaps,
        })
    }

    /// One Gaussian arm with mean `best` followed by `n_arms - 1` arms with
    /// mean `other`, all with the same variance.
    pub fn gaussian_benchmark(n_arms: usize, best: f64, other: f64, variance: f64) -> Result<Self> {
        if n_arms == 0 {
            return Err(Error::config("arms", "bandit instance has no arms"));
        }
        let mut arms = vec![ArmSpec::gaussian(best, variance)?];
        arms.extend(std::iter::repeat_n(
            ArmSpec::gaussian(other, variance)?,
            n_arms - 1,
        ));
        Self::new(arms)
    }

    /// Triangular arms on `[0, 1]`: the first peaks at 1, the rest at 0.
    pub fn triangular_benchmark(n_arms: usize) -> Result<Self> {
        if n_arms == 0 {
            return Err(Error::config("arms", "bandit instance has no arms"));
        }
        let mut arms = vec![ArmSpec::triangular(0.0, 1.0, 1.0)?];
        arms.extend(std::iter::repeat_n(
            ArmSpec::triangular(0.0, 1.0, 0.0)?,
            n_arms - 1,
        ));
        Self::new(arms)
    }

    pub fn arms(&self) -> &[ArmSpec] {
        &self.arms
    }

    pub fn len(&self) -> usize {
        self.arms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arms.is_empty()
    }

    pub fn optimal_index(&self) -> usize {
        self.optimal
    }

    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn sigmas(&self) -> Vec<f64> {
        self.arms.iter().map(ArmSpec::sigma).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Role};

    const M: usize = 1_000_000;

    fn empirical_mean(arm: &ArmSpec, entity: u64) -> f64 {
        let mut rng = stream(42, 0, Role::Reward, entity);
        let mut sum = 0.0;
        for _ in 0..M {
            let x = sample_reward(arm, &mut rng);
            if let Some((a, b)) = arm.support() {
                assert!((a..=b).contains(&x), "{x} escaped [{a}, {b}]");
            }
            sum += x;
        }
        sum / M as f64
    }

    #[test]
    fn empirical_means_within_four_proxy_standard_errors() {
        let arms = [
            ArmSpec::gaussian(11.0, 1.0).unwrap(),
            ArmSpec::bernoulli(0.3).unwrap(),
            ArmSpec::triangular(0.0, 1.0, 0.0).unwrap(),
            ArmSpec::triangular(-2.0, 3.0, 0.5).unwrap(),
            ArmSpec::constant(4.5).unwrap(),
        ];
        for (i, arm) in arms.iter().enumerate() {
            let mean = empirical_mean(arm, i as u64);
            let tol = 4.0 * (arm.variance_proxy() / M as f64).sqrt();
            assert!(
                (mean - arm.mean()).abs() <= tol,
                "{}: {mean} vs {} (tol {tol})",
                arm.kind(),
                arm.mean()
            );
        }
    }

    #[test]
    fn triangular_mode_one_mean_is_two_thirds() {
        let arm = ArmSpec::triangular(0.0, 1.0, 1.0).unwrap();
        // Closed form (a + b + mode) / 3, and the true variance (1/18) for the error.
        let expected = (0.0 + 1.0 + 1.0) / 3.0;
        let se = (1.0 / 18.0 / M as f64).sqrt();
        let mean = empirical_mean(&arm, 99);
        assert!((mean - expected).abs() <= 3.0 * se, "{mean}");
    }

    #[test]
    fn gaussian_variance_matches_proxy() {
        let arm = ArmSpec::gaussian(11.0, 1.0).unwrap();
        assert_eq!(arm.variance_proxy(), 1.0);
        let mut rng = stream(5, 0, Role::Reward, 0);
        let xs: Vec<f64> = (0..200_000)
            .map(|_| sample_reward(&arm, &mut rng))
            .collect();
        let m = xs.iter().sum::<f64>() / xs.len() as f64;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
        assert!((v - 1.0).abs() < 0.02, "{v}");
    }

    #[test]
    fn constant_arm_is_exact() {
        let arm = ArmSpec::constant(2.5).unwrap();
        let mut rng = stream(0, 0, Role::Reward, 0);
        assert!((0..100).all(|_| sample_reward(&arm, &mut rng) == 2.5));
        assert_eq!(arm.variance_proxy(), 0.0);
        assert_eq!(arm.sigma(), 0.0);
    }

    #[test]
    fn bounded_kinds_use_quarter_range_squared() {
        assert_eq!(ArmSpec::bernoulli(0.2).unwrap().variance_proxy(), 0.25);
        assert_eq!(
            ArmSpec::triangular(0.0, 1.0, 1.0).unwrap().variance_proxy(),
            0.25
        );
        assert_eq!(
            ArmSpec::triangular(-1.0, 3.0, 0.0)
                .unwrap()
                .variance_proxy(),
            4.0
        );
    }

    #[test]
    fn bounded_variance_proxy() {
        assert_eq!(variance_proxy_of_bounded(0.0, 1.0).unwrap(), 0.25);
        assert_eq!(variance_proxy_of_bounded(1.5, 1.5).unwrap(), 0.0);
        assert_eq!(variance_proxy_of_bounded(-3.0, 5.0).unwrap(), 16.0);
        assert!(matches!(
            variance_proxy_of_bounded(1.0, 0.0),
            Err(Error::InvalidInterval { .. })
        ));
    }

    #[test]
    fn gap_examples() {
        let g = |means: &[f64]| {
            let arms: Vec<_> = means
                .iter()
                .map(|&m| ArmSpec::constant(m).unwrap())
                .collect();
            gaps(&arms).unwrap()
        };
        let mut benchmark = vec![11.0];
        benchmark.extend([10.0; 9]);
        let mut expected = vec![0.0];
        expected.extend([1.0; 9]);
        assert_eq!(g(&benchmark), expected);
        assert_eq!(g(&[4.0]), vec![0.0]);
        assert_eq!(g(&[3.0, 7.0, 5.0]), vec![4.0, 0.0, 2.0]);
        assert!(matches!(gaps(&[]), Err(Error::Config { .. })));
    }

    #[test]
    fn instance_tracks_optimal_arm() {
        let inst = BanditInstance::new(vec![
            ArmSpec::constant(3.0).unwrap(),
            ArmSpec::constant(7.0).unwrap(),
            ArmSpec::constant(5.0).unwrap(),
        ])
        .unwrap();
        assert_eq!(inst.optimal_index(), 1);
        assert_eq!(inst.gaps(), &[4.0, 0.0, 2.0]);

        let bench = BanditInstance::gaussian_benchmark(10, 11.0, 10.0, 1.0).unwrap();
        assert_eq!(bench.optimal_index(), 0);
        assert_eq!(bench.len(), 10);
        assert!(bench.gaps()[1..].iter().all(|&g| g == 1.0));

        let tri = BanditInstance::triangular_benchmark(10).unwrap();
        assert!((tri.gaps()[1] - 1.0 / 3.0).abs() < 1e-15);
        assert!(tri.sigmas().iter().all(|&s| s == 0.5));
    }

    #[test]
    fn rejects_bad_arms() {
        assert!("cauchy".parse::<ArmKind>().is_err());
        assert_eq!(
            "bounded-triangular".parse::<ArmKind>().unwrap(),
            ArmKind::Triangular
        );
        assert!(ArmSpec::gaussian(0.0, -1.0).is_err());
        assert!(ArmSpec::bernoulli(1.5).is_err());
        assert!(ArmSpec::triangular(1.0, 0.0, 0.5).is_err());
        assert!(ArmSpec::triangular(0.0, 1.0, 2.0).is_err());
        assert!(ArmSpec::constant(f64::NAN).is_err());
    }
}
