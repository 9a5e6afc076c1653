//! Grid functions on the unit interval with homogeneous Dirichlet data.
//!
//! Only interior nodes `x_i = i h`, `i = 1..=n`, are stored. The order is the
//! componentwise one and the metric is the `h`-weighted discrete L² distance,
//! so distances are comparable across resolutions.

use crate::error::{usage, LabError, Result};

/// Uniform grid on (0, 1) with `n_interior` unknowns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridSpec {
    n_interior: usize,
}

impl GridSpec {
    pub fn new(n_interior: usize) -> Result<Self> {
        if n_interior == 0 {
            return Err(usage("grid needs at least one interior node"));
        }
        Ok(Self { n_interior })
    }

    pub fn n_interior(&self) -> usize {
        self.n_interior
    }

    /// Mesh width `1 / (n + 1)`.
    pub fn h(&self) -> f64 {
        1.0 / (self.n_interior as f64 + 1.0)
    }

    /// Coordinate of interior node `i` (zero based), i.e. `(i + 1) h`.
    pub fn node(&self, i: usize) -> f64 {
        (i as f64 + 1.0) * self.h()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_interior).map(move |i| self.node(i))
    }

    /// Smallest eigenvalue of the discrete Dirichlet operator `-L_h`,
    /// `(4 / h²) sin²(π h / 2)`. Always below π².
    pub fn first_eigenvalue(&self) -> f64 {
        let h = self.h();
        let s = (std::f64::consts::PI * h / 2.0).sin();
        4.0 * s * s / (h * h)
    }

    fn check(&self, other: &GridSpec) -> Result<()> {
        if self != other {
            return Err(LabError::SpecMismatch {
                left: self.n_interior,
                right: other.n_interior,
            });
        }
        Ok(())
    }
}

/// Interior nodal values of a Dirichlet grid function. All values are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    spec: GridSpec,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(spec: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != spec.n_interior() {
            return Err(usage(format!(
                "expected {} interior values, got {}",
                spec.n_interior(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(usage(format!("non-finite value at interior node {i}")));
        }
        Ok(Self { spec, values })
    }

    /// Constructor for values produced internally by the solver; finiteness is
    /// checked in debug builds only.
    pub(crate) fn from_raw(spec: GridSpec, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), spec.n_interior());
        debug_assert!(values.iter().all(|v| v.is_finite()));
        Self { spec, values }
    }

    pub fn zeros(spec: GridSpec) -> Self {
        Self::from_raw(spec, vec![0.0; spec.n_interior()])
    }

    pub fn constant(spec: GridSpec, c: f64) -> Result<Self> {
        Self::new(spec, vec![c; spec.n_interior()])
    }

    /// Samples `f` at the interior nodes.
    pub fn from_fn(spec: GridSpec, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(spec, spec.nodes().map(f).collect())
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Componentwise `self ≤ other`, exact.
    pub fn leq(&self, other: &GridFunction) -> Result<bool> {
        self.spec.check(&other.spec)?;
        Ok(self.values.iter().zip(&other.values).all(|(a, b)| a <= b))
    }

    /// Discrete L² distance `sqrt(h Σ (u_i - v_i)²)`.
    pub fn metric(&self, other: &GridFunction) -> Result<f64> {
        self.spec.check(&other.spec)?;
        Ok(self.metric_unchecked(other))
    }

    pub(crate) fn metric_unchecked(&self, other: &GridFunction) -> f64 {
        let ss: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        (self.spec.h() * ss).sqrt()
    }

    /// Max-norm distance. Diagnostic only; the lab's metric is [`Self::metric`].
    pub fn sup_distance(&self, other: &GridFunction) -> Result<f64> {
        self.spec.check(&other.spec)?;
        Ok(self.sup_distance_unchecked(other))
    }

    pub(crate) fn sup_distance_unchecked(&self, other: &GridFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| f64::max(m, (a - b).abs()))
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| f64::max(m, v.abs()))
    }

    /// Largest amount by which `self` exceeds `other` at any node (0 when `self ≤ other`).
    pub fn excess_over(&self, other: &GridFunction) -> Result<f64> {
        self.spec.check(&other.spec)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| f64::max(m, a - b)))
    }

    /// True iff every interior value is strictly positive.
    pub fn is_nondegenerate(&self) -> bool {
        self.values.iter().all(|&v| v > 0.0)
    }

    pub fn neg(&self) -> GridFunction {
        Self::from_raw(self.spec, self.values.iter().map(|v| -v).collect())
    }

    pub fn scale(&self, c: f64) -> Result<GridFunction> {
        Self::new(self.spec, self.values.iter().map(|v| c * v).collect())
    }

    /// `self + c` at every node.
    pub fn shift(&self, c: f64) -> Result<GridFunction> {
        Self::new(self.spec, self.values.iter().map(|v| v + c).collect())
    }

    pub fn add(&self, other: &GridFunction) -> Result<GridFunction> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Componentwise minimum (lattice meet).
    pub fn meet(&self, other: &GridFunction) -> Result<GridFunction> {
        self.zip_with(other, f64::min)
    }

    /// Componentwise maximum (lattice join).
    pub fn join(&self, other: &GridFunction) -> Result<GridFunction> {
        self.zip_with(other, f64::max)
    }

    fn zip_with(&self, other: &GridFunction, f: impl Fn(f64, f64) -> f64) -> Result<GridFunction> {
        self.spec.check(&other.spec)?;
        Self::new(
            self.spec,
            self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        )
    }
}

/// Order interval `{y : lower ≤ y ≤ upper}`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderInterval {
    lower: GridFunction,
    upper: GridFunction,
}

impl OrderInterval {
    pub fn new(lower: GridFunction, upper: GridFunction) -> Result<Self> {
        if !lower.leq(&upper)? {
            return Err(usage("order interval needs lower ≤ upper"));
        }
        Ok(Self { lower, upper })
    }

    /// Symmetric interval `[-upper, upper]`.
    pub fn symmetric(upper: GridFunction) -> Result<Self> {
        Self::new(upper.neg(), upper)
    }

    pub fn lower(&self) -> &GridFunction {
        &self.lower
    }

    pub fn upper(&self) -> &GridFunction {
        &self.upper
    }

    pub fn spec(&self) -> GridSpec {
        self.lower.spec
    }

    /// Componentwise projection of `y` onto the interval.
    pub fn clamp(&self, y: &GridFunction) -> Result<GridFunction> {
        self.spec().check(&y.spec)?;
        Ok(GridFunction::from_raw(
            y.spec,
            y.values
                .iter()
                .zip(self.lower.values.iter().zip(&self.upper.values))
                .map(|(&v, (&lo, &hi))| lo.max(v.min(hi)))
                .collect(),
        ))
    }

    pub fn contains(&self, y: &GridFunction) -> Result<bool> {
        Ok(self.lower.leq(y)? && y.leq(&self.upper)?)
    }

    /// `metric(y, clamp(y))`; zero exactly when `y` lies in the interval.
    pub fn distance(&self, y: &GridFunction) -> Result<f64> {
        let p = self.clamp(y)?;
        Ok(y.metric_unchecked(&p))
    }

    /// Widens the interval by `margin` at every node.
    pub fn widen(&self, margin: f64) -> Result<Self> {
        Self::new(self.lower.shift(-margin)?, self.upper.shift(margin)?)
    }
}

/// Distance from `y` to the order interval; see [`OrderInterval::distance`].
pub fn interval_distance(y: &GridFunction, interval: &OrderInterval) -> Result<f64> {
    interval.distance(y)
}

/// Hausdorff semidistance `sup_{b ∈ B} inf_{a ∈ A} ρ(b, a)`.
///
/// Not symmetric: it vanishes whenever `B ⊆ A`.
pub fn hausdorff_semidist(b: &[GridFunction], a: &[GridFunction]) -> Result<f64> {
    if b.is_empty() || a.is_empty() {
        return Err(usage("Hausdorff semidistance of an empty set"));
    }
    let spec = a[0].spec;
    for u in a.iter().chain(b) {
        spec.check(&u.spec)?;
    }
    Ok(b.iter()
        .map(|x| a.iter().map(|y| x.metric_unchecked(y)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max))
}

/// Symmetric Hausdorff distance, the max of both semidistances.
pub fn hausdorff_distance(a: &[GridFunction], b: &[GridFunction]) -> Result<f64> {
    Ok(hausdorff_semidist(a, b)?.max(hausdorff_semidist(b, a)?))
}

/// Componentwise min/max over a non-empty finite family: the tightest
/// interval containing every member.
pub fn order_hull(set: &[GridFunction]) -> Result<OrderInterval> {
    let (first, rest) = set.split_first().ok_or_else(|| usage("order hull of an empty set"))?;
    let mut lo = first.clone();
    let mut hi = first.clone();
    for u in rest {
        lo = lo.meet(u)?;
        hi = hi.join(u)?;
    }
    OrderInterval::new(lo, hi)
}
