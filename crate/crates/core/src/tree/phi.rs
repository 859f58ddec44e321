use super::{Fragment, Subtree, TreeError};
use crate::graph::Weight;

/// Continuous superadditive function of subtrees.
///
/// Built from the measure, the mass of a nonnegative weight, and Hölder
/// combinations `Φ₁^α Φ₂^(1-α)`, which stay superadditive.
#[derive(Debug, Clone, PartialEq)]
pub enum SuperadditiveFn {
    /// `|T|`.
    Measure,
    /// `∫_T V`, `V ≥ 0`.
    Mass(Weight),
    /// `Φ₁^α Φ₂^(1-α)`, `0 < α < 1`.
    Holder {
        first: Box<SuperadditiveFn>,
        second: Box<SuperadditiveFn>,
        alpha: f64,
    },
}

impl SuperadditiveFn {
    pub fn measure() -> Self {
        Self::Measure
    }

    pub fn mass(weight: Weight) -> Result<Self, TreeError> {
        if !weight.is_nonnegative() {
            return Err(TreeError::NegativeWeight);
        }
        Ok(Self::Mass(weight))
    }

    pub fn holder(first: Self, second: Self, alpha: f64) -> Result<Self, TreeError> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(TreeError::InvalidExponent(alpha));
        }
        Ok(Self::Holder {
            first: Box::new(first),
            second: Box::new(second),
            alpha,
        })
    }

    /// `Φ_V(T) = |T|^{1/2} (∫_T V)^{1/2}`.
    pub fn phi_v(weight: Weight) -> Result<Self, TreeError> {
        Self::holder(Self::Measure, Self::mass(weight)?, 0.5)
    }

    /// `Φ_l(T) = |T|^{1 - 1/(2l)} (∫_T V)^{1/(2l)}`; `Φ_1 = Φ_V`.
    pub fn phi_l(weight: Weight, l: u32) -> Result<Self, TreeError> {
        if l == 0 {
            return Err(TreeError::InvalidExponent(0.0));
        }
        Self::holder(Self::Measure, Self::mass(weight)?, 1.0 - 0.5 / l as f64)
    }

    pub fn eval(&self, fragments: &[Fragment]) -> f64 {
        match self {
            Self::Measure => fragments.iter().map(Fragment::length).sum(),
            Self::Mass(w) => fragments
                .iter()
                .map(|f| w.edge(f.edge).integral_over(f.a, f.b))
                .sum(),
            Self::Holder { first, second, alpha } => {
                let (x, y) = (first.eval(fragments), second.eval(fragments));
                if x == 0.0 || y == 0.0 {
                    0.0
                } else {
                    x.powf(*alpha) * y.powf(1.0 - alpha)
                }
            }
        }
    }

    pub fn eval_subtree(&self, t: &Subtree) -> f64 {
        self.eval(t.fragments())
    }

    pub fn label(&self) -> String {
        match self {
            Self::Measure => "measure".into(),
            Self::Mass(_) => "mass".into(),
            Self::Holder { first, second, alpha } => {
                format!("{}^{} * {}^{}", first.label(), alpha, second.label(), 1.0 - alpha)
            }
        }
    }
}

/// `C(l) = l^{2l} / (((l-1)!)² (2l - 1))`.
pub fn higher_order_constant(l: u32) -> Result<f64, TreeError> {
    if l == 0 {
        return Err(TreeError::InvalidExponent(0.0));
    }
    let lf = l as f64;
    // l^{2l} / ((l-1)!)² = l² ∏_{k<l} (l/k)², each factor ≥ 1
    let mut c = lf * lf / (2.0 * lf - 1.0);
    for k in 1..l {
        c *= (lf / k as f64).powi(2);
    }
    if c.is_finite() {
        Ok(c)
    } else {
        Err(TreeError::Overflow(l))
    }
}
