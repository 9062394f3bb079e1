//! Averaging over a spread of kick strengths across the atomic cloud.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use super::AnalyticError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpreadDistribution {
    /// `phi_d` uniform on `[phi(1 - delta), phi(1 + delta)]`.
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureRule {
    /// Exact for polynomials in `phi_d` up to degree `2M - 1`.
    GaussLegendre,
    Midpoint,
}

/// Fractional spread of the kick strength and how it is integrated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntensitySpread {
    /// Half-width `delta` as a fraction of the nominal `phi_d`, in `[0, 1)`.
    pub relative_width: f64,
    pub quadrature_points: usize,
    pub distribution: SpreadDistribution,
    pub rule: QuadratureRule,
}

impl Default for IntensitySpread {
    fn default() -> Self {
        Self::uniform(0.1, 51)
    }
}

impl IntensitySpread {
    pub fn none() -> Self {
        Self::uniform(0.0, 1)
    }

    pub fn uniform(relative_width: f64, quadrature_points: usize) -> Self {
        Self {
            relative_width,
            quadrature_points,
            distribution: SpreadDistribution::Uniform,
            rule: QuadratureRule::GaussLegendre,
        }
    }

    pub fn with_rule(mut self, rule: QuadratureRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn validate(&self) -> Result<(), AnalyticError> {
        if !(self.relative_width.is_finite() && (0.0..1.0).contains(&self.relative_width)) {
            return Err(AnalyticError::SpreadWidth(self.relative_width));
        }
        if self.quadrature_points == 0 {
            return Err(AnalyticError::SpreadPoints);
        }
        Ok(())
    }

    pub fn is_degenerate(&self) -> bool {
        self.relative_width == 0.0 || self.quadrature_points == 1
    }

    /// Nodes `(phi_i, w_i)` around `phi_nominal`; weights are non-negative
    /// and sum to one.
    pub fn nodes(&self, phi_nominal: f64) -> Result<Vec<(f64, f64)>, AnalyticError> {
        self.validate()?;
        if self.is_degenerate() {
            return Ok(vec![(phi_nominal, 1.0)]);
        }
        let unit = match self.rule {
            QuadratureRule::GaussLegendre => gauss_legendre(self.quadrature_points),
            QuadratureRule::Midpoint => {
                let m = self.quadrature_points;
                (0..m)
                    .map(|i| (2.0 * (i as f64 + 0.5) / m as f64 - 1.0, 1.0 / m as f64))
                    .collect()
            }
        };
        let delta = self.relative_width;
        Ok(unit
            .into_iter()
            .map(|(t, w)| (phi_nominal * (1.0 + delta * t), w))
            .collect())
    }

    /// Weighted mean of `f` over the spread nodes.
    pub fn average<E>(
        &self,
        phi_nominal: f64,
        mut f: impl FnMut(f64) -> Result<f64, E>,
    ) -> Result<f64, E>
    where
        E: From<AnalyticError>,
    {
        if self.is_degenerate() {
            self.validate()?;
            return f(phi_nominal);
        }
        let mut acc = 0.0;
        for (phi, w) in self.nodes(phi_nominal)? {
            acc += w * f(phi)?;
        }
        Ok(acc)
    }
}

/// Gauss-Legendre nodes on `[-1, 1]` with weights normalised to sum to 1,
/// ordered by ascending node.
pub fn gauss_legendre(m: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); m];
    let half = m.div_ceil(2);
    for i in 0..half {
        // Tricomi initial guess for the i-th largest root.
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(m, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(m, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[m - 1 - i] = (x, w);
        out[i] = (-x, w);
    }
    let total: f64 = out.iter().map(|(_, w)| w).sum();
    for node in out.iter_mut() {
        node.1 /= total;
    }
    out
}

/// `(P_m(x), P_m'(x))`.
fn legendre(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=m {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

impl fmt::Display for SpreadDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpreadDistribution::Uniform => f.write_str("uniform"),
        }
    }
}

impl FromStr for SpreadDistribution {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(Self::Uniform),
            other => Err(format!(
                "unknown spread distribution `{other}` (expected uniform)"
            )),
        }
    }
}

impl fmt::Display for QuadratureRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadratureRule::GaussLegendre => f.write_str("gauss-legendre"),
            QuadratureRule::Midpoint => f.write_str("midpoint"),
        }
    }
}

impl FromStr for QuadratureRule {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gauss-legendre" => Ok(Self::GaussLegendre),
            "midpoint" => Ok(Self::Midpoint),
            other => Err(format!(
                "unknown quadrature rule `{other}` (expected gauss-legendre or midpoint)"
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_are_a_probability_vector() {
        for m in [1, 2, 3, 7, 51, 128] {
            let s = IntensitySpread::uniform(0.1, m);
            let nodes = s.nodes(4.8).unwrap();
            let total: f64 = nodes.iter().map(|(_, w)| w).sum();
            assert!((total - 1.0).abs() < 1e-14, "m={m}");
            assert!(nodes.iter().all(|(_, w)| *w >= 0.0));
            let mid = s.with_rule(QuadratureRule::Midpoint).nodes(4.8).unwrap();
            let total: f64 = mid.iter().map(|(_, w)| w).sum();
            assert!((total - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn nodes_stay_inside_the_band() {
        let nodes = IntensitySpread::uniform(0.1, 51).nodes(5.0).unwrap();
        assert!(nodes.iter().all(|(p, _)| *p > 4.5 && *p < 5.5));
        assert!(nodes.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        // mean of t^k on [-1, 1]: 1/(k+1) for even k, 0 for odd
        let nodes = gauss_legendre(6);
        for k in 0..12 {
            let got: f64 = nodes.iter().map(|(t, w)| w * t.powi(k)).sum();
            let want = if k % 2 == 0 {
                1.0 / (k as f64 + 1.0)
            } else {
                0.0
            };
            assert!((got - want).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn degenerate_spreads() {
        assert_eq!(
            IntensitySpread::uniform(0.0, 51).nodes(3.0).unwrap(),
            vec![(3.0, 1.0)]
        );
        assert_eq!(
            IntensitySpread::uniform(0.2, 1).nodes(3.0).unwrap(),
            vec![(3.0, 1.0)]
        );
    }

    #[test]
    fn constant_averages_to_itself() {
        let s = IntensitySpread::uniform(0.3, 17);
        let v: Result<f64, AnalyticError> = s.average(2.0, |_| Ok(7.25));
        assert!((v.unwrap() - 7.25).abs() < 1e-14);
    }

    #[test]
    fn invalid_spreads() {
        assert!(IntensitySpread::uniform(1.0, 3).validate().is_err());
        assert!(IntensitySpread::uniform(-0.1, 3).validate().is_err());
        assert!(IntensitySpread::uniform(0.1, 0).validate().is_err());
    }
}
