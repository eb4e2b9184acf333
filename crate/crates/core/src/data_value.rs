//! Entropy-based information value and its aggregation into a data-value index.

use std::f64::consts::{E, PI};

use num_complex::Complex64;

use crate::error::{ensure, Error, Result};
use crate::stochastic::special::trapezoid;

/// An information source described by its probability law.
#[derive(Debug, Clone, PartialEq)]
pub enum SourceDist {
    Uniform {
        width: f64,
    },
    Gaussian {
        variance: f64,
    },
    /// Density sampled on the uniform grid `x_min + i·h`.
    Grid {
        x_min: f64,
        h: f64,
        density: Vec<f64>,
    },
}

/// Entropy after the floor at 0 and the optional cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entropy {
    pub value: f64,
    pub raw: f64,
    pub clamped_low: bool,
    pub clamped_high: bool,
}

/// ½ ln(2πe v²), the entropy of a normal law with variance `variance`.
pub fn gaussian_entropy(variance: f64) -> f64 {
    0.5 * (2.0 * PI * E * variance).ln()
}

/// Differential entropy in nats, floored at 0 and capped at `sigma_max` when given.
pub fn differential_entropy(d: &SourceDist, sigma_max: Option<f64>) -> Result<Entropy> {
    let raw = match d {
        SourceDist::Uniform { width } => {
            ensure(*width > 0.0, "width", "must be positive")?;
            width.ln()
        }
        SourceDist::Gaussian { variance } => {
            ensure(*variance > 0.0, "variance", "must be positive")?;
            gaussian_entropy(*variance)
        }
        SourceDist::Grid { h, density, .. } => {
            ensure(*h > 0.0, "h", "must be positive")?;
            ensure(density.len() >= 2, "density", "needs at least two points")?;
            ensure(density.iter().all(|&p| p >= 0.0 && p.is_finite()), "density", "must be finite and nonnegative")?;
            let integral = trapezoid(density, *h);
            if (integral - 1.0).abs() > 1e-9 {
                return Err(Error::NotNormalized { integral });
            }
            let plogp: Vec<f64> = density.iter().map(|&p| if p > 0.0 { -p * p.ln() } else { 0.0 }).collect();
            trapezoid(&plogp, *h)
        }
    };
    let mut e = Entropy { value: raw, raw, clamped_low: false, clamped_high: false };
    if raw < 0.0 {
        e.value = 0.0;
        e.clamped_low = true;
    }
    if let Some(cap) = sigma_max {
        if e.value > cap {
            e.value = cap;
            e.clamped_high = true;
        }
    }
    Ok(e)
}

/// Information value V = 1 − 2σ/σ_max in [−1, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfoValue {
    pub value: f64,
    /// σ exceeded σ_max and was capped.
    pub clamped: bool,
}

pub fn information_value(sigma_t: f64, sigma_max: f64) -> Result<InfoValue> {
    ensure(sigma_max > 0.0 && sigma_max.is_finite(), "sigma_max", "must be positive")?;
    ensure(sigma_t >= 0.0, "sigma_t", "must be nonnegative")?;
    let clamped = sigma_t > sigma_max;
    let s = sigma_t.min(sigma_max);
    Ok(InfoValue { value: 1.0 - 2.0 * s / sigma_max, clamped })
}

/// Maps V ∈ [−1, 1] to [0, 1].
pub fn normalize_value(v: f64) -> f64 {
    0.5 * (v + 1.0)
}

/// Unit direction (a, b, c) in value space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionVector {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl DirectionVector {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let norm2 = a * a + b * b + c * c;
        ensure((norm2 - 1.0).abs() <= 1e-12, "direction", "must have unit norm")?;
        Ok(DirectionVector { a, b, c })
    }

    /// Scales an arbitrary nonzero vector to unit length.
    pub fn normalized(a: f64, b: f64, c: f64) -> Result<Self> {
        let n = (a * a + b * b + c * c).sqrt();
        ensure(n > 0.0 && n.is_finite(), "direction", "must be nonzero")?;
        Ok(DirectionVector { a: a / n, b: b / n, c: c / n })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionMatrix {
    pub matrix: [[Complex64; 2]; 2],
    /// Real eigenvalues, largest first.
    pub eigenvalues: [f64; 2],
}

/// `magnitude · [[c, a − ib], [a + ib, −c]]` and its eigenvalues.
pub fn direction_value_matrix(d: &DirectionVector, magnitude: f64) -> Result<DirectionMatrix> {
    let d = DirectionVector::new(d.a, d.b, d.c)?;
    ensure(magnitude > 0.0 && magnitude.is_finite(), "magnitude", "must be positive")?;
    let m = [[Complex64::new(d.c, 0.0), Complex64::new(d.a, -d.b)], [Complex64::new(d.a, d.b), Complex64::new(-d.c, 0.0)]]
        .map(|row| row.map(|z| z * magnitude));
    // roots of λ² − tr·λ + det
    let half_tr = (m[0][0] + m[1][1]) * 0.5;
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let root = (half_tr * half_tr - det).sqrt();
    let (l1, l2) = (half_tr + root, half_tr - root);
    let tol = 1e-12 * magnitude;
    if l1.im.abs() > tol || l2.im.abs() > tol {
        return Err(Error::param("direction", "matrix has complex eigenvalues"));
    }
    let (hi, lo) = if l1.re >= l2.re { (l1.re, l2.re) } else { (l2.re, l1.re) };
    Ok(DirectionMatrix { matrix: m, eigenvalues: [hi, lo] })
}

/// Pairwise synergy `a` and antagonism `b` between sources `i < j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interaction {
    pub i: usize,
    pub j: usize,
    pub synergy: f64,
    pub antagonism: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfoEnsemble {
    pub sources: Vec<SourceDist>,
    /// Unlisted pairs have zero coefficients.
    pub interactions: Vec<Interaction>,
    pub strength: f64,
    /// Variance of the reference normal law that fixes σ_max.
    pub reference_variance: f64,
}

impl InfoEnsemble {
    pub fn sigma_max(&self) -> f64 {
        gaussian_entropy(self.reference_variance)
    }

    /// Normalized values φ(V) of every source.
    pub fn normalized_values(&self) -> Result<Vec<f64>> {
        let cap = self.sigma_max();
        ensure(cap > 0.0, "reference_variance", "gives a nonpositive entropy cap")?;
        self.sources
            .iter()
            .map(|s| {
                let h = differential_entropy(s, Some(cap))?;
                Ok(normalize_value(information_value(h.value, cap)?.value))
            })
            .collect()
    }
}

/// Mean normalized value plus `strength` times the mean pairwise interaction.
pub fn aggregate_values(phi: &[f64], interactions: &[Interaction], strength: f64) -> Result<f64> {
    let n = phi.len();
    ensure(n >= 1, "sources", "need at least one source")?;
    ensure(strength >= 0.0, "strength", "must be nonnegative")?;
    let mut seen = std::collections::BTreeSet::new();
    let mut pair_sum = 0.0;
    for it in interactions {
        if !(it.i < it.j && it.j < n) {
            return Err(Error::DimensionMismatch(format!("interaction ({}, {}) for {n} sources; need i < j < n", it.i, it.j)));
        }
        if !seen.insert((it.i, it.j)) {
            return Err(Error::DimensionMismatch(format!("pair ({}, {}) listed twice", it.i, it.j)));
        }
        ensure(it.synergy >= 0.0 && it.antagonism >= 0.0, "interaction", "coefficients must be nonnegative")?;
        pair_sum += (it.synergy - it.antagonism) * phi[it.i] * phi[it.j];
    }
    let mean = phi.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return Ok(mean);
    }
    let pairs = (n * (n - 1)) as f64 / 2.0;
    Ok(mean + strength * pair_sum / pairs)
}

pub fn aggregate_data_value(e: &InfoEnsemble) -> Result<f64> {
    ensure(e.reference_variance > 0.0, "reference_variance", "must be positive")?;
    aggregate_values(&e.normalized_values()?, &e.interactions, e.strength)
}

/// Logistic compression of the summed values into (0, 1).
pub fn data_value_index(batch: &[f64]) -> Result<f64> {
    ensure(batch.iter().all(|x| x.is_finite()), "batch", "values must be finite")?;
    let s: f64 = batch.iter().sum();
    Ok(if s >= 0.0 {
        1.0 / (1.0 + (-s).exp())
    } else {
        let e = s.exp();
        e / (1.0 + e)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn entropy_floor_and_reference() {
        let u1 = differential_entropy(&SourceDist::Uniform { width: 1.0 }, None).unwrap();
        assert_eq!(u1.value, 0.0);
        let u = differential_entropy(&SourceDist::Uniform { width: 0.5 }, None).unwrap();
        assert!(u.raw < 0.0 && u.value == 0.0 && u.clamped_low);
        let g = differential_entropy(&SourceDist::Gaussian { variance: 1.0 }, None).unwrap();
        assert_abs_diff_eq!(g.value, 1.418939, epsilon = 1e-6);
    }

    #[test]
    fn grid_entropy_matches_closed_form() {
        let h = 1e-3;
        let density: Vec<f64> = (0..=20_000)
            .map(|i| {
                let x = -10.0 + i as f64 * h;
                (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
            })
            .collect();
        let g = differential_entropy(&SourceDist::Grid { x_min: -10.0, h, density }, None).unwrap();
        assert_abs_diff_eq!(g.value, gaussian_entropy(1.0), epsilon = 1e-9);
        let bad = SourceDist::Grid { x_min: 0.0, h: 1.0, density: vec![1.0, 1.0, 1.0] };
        assert!(matches!(differential_entropy(&bad, None), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn information_value_endpoints() {
        assert_eq!(information_value(0.0, 2.0).unwrap().value, 1.0);
        assert_eq!(information_value(2.0, 2.0).unwrap().value, -1.0);
        assert_eq!(information_value(1.0, 2.0).unwrap().value, 0.0);
        let c = information_value(3.0, 2.0).unwrap();
        assert!(c.clamped && c.value == -1.0);
        assert!(information_value(0.0, 0.0).is_err());
        let v = 3.7;
        let s = differential_entropy(&SourceDist::Gaussian { variance: v }, None).unwrap().value;
        assert_eq!(information_value(s, gaussian_entropy(v)).unwrap().value, -1.0);
    }

    #[test]
    fn direction_matrices() {
        let z = direction_value_matrix(&DirectionVector::new(0.0, 0.0, 1.0).unwrap(), 1.0).unwrap();
        assert_eq!(z.matrix[0][0], Complex64::new(1.0, 0.0));
        assert_eq!(z.matrix[1][1], Complex64::new(-1.0, 0.0));
        assert_eq!(z.matrix[0][1], Complex64::new(0.0, 0.0));
        assert_eq!(z.eigenvalues, [1.0, -1.0]);
        let x = direction_value_matrix(&DirectionVector::new(1.0, 0.0, 0.0).unwrap(), 1.0).unwrap();
        assert_eq!(x.matrix[0][1], Complex64::new(1.0, 0.0));
        assert_eq!(x.matrix[0][0], Complex64::new(0.0, 0.0));
        assert_abs_diff_eq!(x.eigenvalues[0], 1.0, epsilon = 1e-15);
        assert!(DirectionVector::new(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn aggregation_examples() {
        let phi = [0.2, 0.6, 0.9];
        assert_abs_diff_eq!(aggregate_values(&phi, &[], 3.0).unwrap(), 1.7 / 3.0, epsilon = 1e-15);
        let pair = [Interaction { i: 0, j: 1, synergy: 1.0, antagonism: 0.0 }];
        assert_eq!(aggregate_values(&[1.0, 1.0], &pair, 1.0).unwrap(), 2.0);
        let full: Vec<Interaction> =
            [(0, 1), (0, 2), (1, 2)].iter().map(|&(i, j)| Interaction { i, j, synergy: 2.0, antagonism: 0.5 }).collect();
        assert_eq!(aggregate_values(&[0.0; 3], &full, 5.0).unwrap(), 0.0);
        let oob = [Interaction { i: 1, j: 3, synergy: 1.0, antagonism: 0.0 }];
        assert!(matches!(aggregate_values(&phi, &oob, 1.0), Err(Error::DimensionMismatch(_))));
        assert_eq!(aggregate_values(&[0.4], &[], 1.0).unwrap(), 0.4);
    }

    #[test]
    fn ensemble_end_to_end() {
        let e = InfoEnsemble {
            sources: vec![SourceDist::Uniform { width: 1.0 }, SourceDist::Gaussian { variance: 4.0 }],
            interactions: vec![],
            strength: 0.0,
            reference_variance: 4.0,
        };
        // values +1 and −1 → φ = 1 and 0
        assert_abs_diff_eq!(aggregate_data_value(&e).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn index_endpoints() {
        assert_eq!(data_value_index(&[]).unwrap(), 0.5);
        assert_eq!(data_value_index(&[0.3, -0.3]).unwrap(), 0.5);
        assert_abs_diff_eq!(data_value_index(&[1.0]).unwrap(), 0.731059, epsilon = 1e-6);
        let big = data_value_index(&[800.0]).unwrap();
        assert!(big <= 1.0 && big > 0.999);
        assert!(data_value_index(&[-800.0]).unwrap() >= 0.0);
        assert!(data_value_index(&[f64::NAN]).is_err());
    }

    proptest! {
        #[test]
        fn eigenvalues_are_plus_minus_magnitude(
            x in -1.0..1.0f64, y in -1.0..1.0f64, z in -1.0..1.0f64, m in 0.01..100.0f64
        ) {
            prop_assume!(x * x + y * y + z * z > 1e-6);
            let d = DirectionVector::normalized(x, y, z).unwrap();
            let r = direction_value_matrix(&d, m).unwrap();
            prop_assert!((r.eigenvalues[0] - m).abs() <= 1e-12 * m);
            prop_assert!((r.eigenvalues[1] + m).abs() <= 1e-12 * m);
            prop_assert_eq!(r.matrix[0][1], r.matrix[1][0].conj());
        }

        #[test]
        fn aggregation_monotone_in_coefficients(
            phi in proptest::collection::vec(0.0..1.0f64, 3),
            a in 0.0..2.0f64, b in 0.0..2.0f64, da in 0.0..1.0f64, j in 0.0..3.0f64
        ) {
            let mk = |a: f64, b: f64| vec![Interaction { i: 0, j: 2, synergy: a, antagonism: b }];
            let base = aggregate_values(&phi, &mk(a, b), j).unwrap();
            prop_assert!(aggregate_values(&phi, &mk(a + da, b), j).unwrap() >= base);
            prop_assert!(aggregate_values(&phi, &mk(a, b + da), j).unwrap() <= base);
        }

        #[test]
        fn index_is_monotone_and_open(s in -30.0..30.0f64, ds in 0.001..5.0f64) {
            let lo = data_value_index(&[s]).unwrap();
            let hi = data_value_index(&[s + ds]).unwrap();
            prop_assert!(lo > 0.0 && hi < 1.0 && hi > lo);
        }
    }
}
