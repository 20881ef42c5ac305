//! Real two-dimensional Hilbert space.
//!
//! A judgment state is a unit vector `a|A⟩ + b|Ã⟩` in some orthonormal basis
//! `{|A⟩, |Ã⟩}`. Probabilities follow the Born rule: the probability of the
//! outcome `|A⟩` is `a²`. Two bases of the same plane model two incompatible
//! perspectives; judging along both in sequence gives order-dependent
//! probabilities.
//!
//! ```
//! use orderfx_core::hilbert::{order_effect, StateVector};
//!
//! let topical = StateVector::from_probability(0.90).unwrap();
//! let positive = StateVector::from_probability(0.40).unwrap();
//! let fx = order_effect(topical, positive).unwrap();
//! assert!((fx.p_ab - 0.6425).abs() < 1e-3);
//! assert!((fx.p_ba - 0.2856).abs() < 1e-3);
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for norm and orthogonality checks.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Coefficients of a unit vector on the two vectors of an orthonormal basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    a: f64,
    b: f64,
}

impl StateVector {
    /// Builds a state from explicit amplitudes, which must already be unit-norm.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        let s = StateVector { a, b };
        s.check_norm()?;
        Ok(s)
    }

    /// Scales `(a, b)` onto the unit circle. Useful for amplitudes printed
    /// at limited precision.
    pub fn normalized(a: f64, b: f64) -> Result<Self> {
        let n = a.hypot(b);
        if !n.is_finite() || n == 0.0 {
            return Err(Error::Contract(format!("cannot normalize ({a}, {b})")));
        }
        Ok(StateVector { a: a / n, b: b / n })
    }

    /// The state `√p|A⟩ + √(1−p)|Ã⟩`.
    pub fn from_probability(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain("probability", p));
        }
        Ok(StateVector {
            a: p.sqrt(),
            b: (1.0 - p).sqrt(),
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a * self.a + self.b * self.b
    }

    pub fn dot(&self, other: &StateVector) -> f64 {
        self.a * other.a + self.b * other.b
    }

    fn check_norm(&self) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > NORM_TOLERANCE || !n.is_finite() {
            return Err(Error::Contract(format!(
                "state ({}, {}) has squared norm {n}",
                self.a, self.b
            )));
        }
        Ok(())
    }
}

/// Which vector of a basis a measurement lands on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    First,
    Second,
}

/// Born-rule probability of `outcome` for `state`.
pub fn born_probability(state: StateVector, outcome: Outcome) -> Result<f64> {
    state.check_norm()?;
    Ok(match outcome {
        Outcome::First => state.a * state.a,
        Outcome::Second => state.b * state.b,
    })
}

/// One state written in two bases: `ψ = a|A⟩ + b|B⟩ = c|C⟩ + d|D⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisRepresentation {
    basis1_name: String,
    coeffs1: StateVector,
    basis2_name: String,
    coeffs2: StateVector,
}

impl BasisRepresentation {
    pub fn new(
        basis1_name: impl Into<String>,
        coeffs1: StateVector,
        basis2_name: impl Into<String>,
        coeffs2: StateVector,
    ) -> Result<Self> {
        let basis1_name = basis1_name.into();
        let basis2_name = basis2_name.into();
        if basis1_name == basis2_name {
            return Err(Error::Contract(format!(
                "both bases are named {basis1_name:?}"
            )));
        }
        coeffs1.check_norm()?;
        coeffs2.check_norm()?;
        Ok(BasisRepresentation {
            basis1_name,
            coeffs1,
            basis2_name,
            coeffs2,
        })
    }

    pub fn basis1_name(&self) -> &str {
        &self.basis1_name
    }

    pub fn basis2_name(&self) -> &str {
        &self.basis2_name
    }

    pub fn coeffs1(&self) -> StateVector {
        self.coeffs1
    }

    pub fn coeffs2(&self) -> StateVector {
        self.coeffs2
    }
}

/// The second basis `{|C⟩, |D⟩}` written in the first basis `{|A⟩, |B⟩}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BasisChange {
    pub c_in_ab: StateVector,
    pub d_in_ab: StateVector,
}

impl BasisChange {
    /// `|⟨A|C⟩|²`, the probability of moving between the two first vectors.
    pub fn cross_probability(&self) -> f64 {
        self.c_in_ab.a * self.c_in_ab.a
    }
}

/// Expresses the second basis in the first.
///
/// With the orthogonal complement fixed as `ψ̃ = b|A⟩ − a|B⟩ = d|C⟩ − c|D⟩`:
///
/// ```text
/// |C⟩ = (ac + bd)|A⟩ + (bc − ad)|B⟩
/// |D⟩ = (ad − bc)|A⟩ + (ac + bd)|B⟩
/// ```
///
/// Components may come out negative; no sign rectification is applied.
pub fn change_of_basis(rep: &BasisRepresentation) -> Result<BasisChange> {
    let StateVector { a, b } = rep.coeffs1;
    let StateVector { a: c, b: d } = rep.coeffs2;
    rep.coeffs1.check_norm()?;
    rep.coeffs2.check_norm()?;

    let diag = a * c + b * d;
    let off = b * c - a * d;
    let change = BasisChange {
        c_in_ab: StateVector { a: diag, b: off },
        d_in_ab: StateVector { a: -off, b: diag },
    };
    change.c_in_ab.check_norm()?;
    change.d_in_ab.check_norm()?;
    let overlap = change.c_in_ab.dot(&change.d_in_ab);
    if overlap.abs() > NORM_TOLERANCE {
        return Err(Error::Contract(format!(
            "basis change not orthogonal (overlap {overlap})"
        )));
    }
    Ok(change)
}

/// Probability of judging `state` first along the first vector of its own
/// basis and then along a second perspective whose overlap with that vector
/// is `cross_prob = |⟨Y|X⟩|²`.
pub fn sequential_projection(state: StateVector, cross_prob: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&cross_prob) {
        return Err(Error::domain("cross probability", cross_prob));
    }
    Ok(born_probability(state, Outcome::First)? * cross_prob)
}

/// `max / min` of two probabilities; `None` when the smaller one is zero.
pub fn probability_ratio(p: f64, q: f64) -> Option<f64> {
    let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
    (lo > 0.0).then(|| hi / lo)
}

/// Both judgment orders for one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderEffect {
    /// `|⟨A|S⟩|²·|⟨B|A⟩|²`: first perspective A, then B.
    pub p_ab: f64,
    /// `|⟨B|S⟩|²·|⟨A|B⟩|²`: first perspective B, then A.
    pub p_ba: f64,
    /// `p_ab − p_ba`.
    pub delta: f64,
    pub ratio: Option<f64>,
    /// `|⟨A|B⟩|²`.
    pub cross_probability: f64,
}

/// Computes both sequential judgment orders for a state known in two bases.
///
/// The two representations are assumed to describe the same state.
pub fn order_effect(state_in_a: StateVector, state_in_b: StateVector) -> Result<OrderEffect> {
    let rep = BasisRepresentation::new("A", state_in_a, "B", state_in_b)?;
    let cross = change_of_basis(&rep)?.cross_probability().min(1.0);
    let p_ab = sequential_projection(state_in_a, cross)?;
    let p_ba = sequential_projection(state_in_b, cross)?;
    Ok(OrderEffect {
        p_ab,
        p_ba,
        delta: p_ab - p_ba,
        ratio: probability_ratio(p_ab, p_ba),
        cross_probability: cross,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(x: f64, y: f64, tol: f64) -> bool {
        (x - y).abs() <= tol
    }

    #[test]
    fn state_from_probability_matches_printed_amplitudes() {
        let s = StateVector::from_probability(0.90).unwrap();
        assert!(close(s.a(), 0.9487, 1e-3) && close(s.b(), 0.3162, 1e-3));
        let s = StateVector::from_probability(0.9438).unwrap();
        assert!(close(s.a(), 0.9715, 1e-3) && close(s.b(), 0.2370, 1e-3));
        let s = StateVector::from_probability(1.0).unwrap();
        assert_eq!((s.a(), s.b()), (1.0, 0.0));
    }

    #[test]
    fn state_from_probability_rejects_out_of_range() {
        for p in [-0.1, 1.5, f64::NAN] {
            match StateVector::from_probability(p) {
                Err(Error::Domain { .. }) => {}
                other => panic!("expected domain error for {p}, got {other:?}"),
            }
        }
        let msg = StateVector::from_probability(1.5).unwrap_err().to_string();
        assert!(msg.contains("1.5"), "{msg}");
    }

    #[test]
    fn new_rejects_non_unit() {
        assert!(matches!(
            StateVector::new(0.9487, 0.3162),
            Err(Error::Contract(_))
        ));
        assert!(StateVector::new(0.6, 0.8).is_ok());
        assert!(StateVector::normalized(0.0, 0.0).is_err());
    }

    #[test]
    fn born_probability_examples() {
        let s = StateVector::from_probability(0.9).unwrap();
        assert!(close(
            born_probability(s, Outcome::First).unwrap(),
            0.90,
            1e-12
        ));
        // 0.6325² evaluated by hand = 0.40005625
        let s = StateVector::normalized(0.6325, 0.7746).unwrap();
        assert!(close(
            born_probability(s, Outcome::First).unwrap(),
            0.4001,
            1e-4
        ));
        let s = StateVector::new(1.0, 0.0).unwrap();
        assert_eq!(born_probability(s, Outcome::Second).unwrap(), 0.0);
    }

    #[test]
    fn change_of_basis_forum_post() {
        let rep = BasisRepresentation::new(
            "topical",
            StateVector::normalized(0.9487, 0.3162).unwrap(),
            "sentiment",
            StateVector::normalized(0.6325, 0.7746).unwrap(),
        )
        .unwrap();
        let ch = change_of_basis(&rep).unwrap();
        assert!(close(ch.c_in_ab.a(), 0.8449, 1e-3));
        assert!(close(ch.c_in_ab.b(), -0.5349, 1e-3));
    }

    #[test]
    fn change_of_basis_reliability_topicality_sign() {
        let rep = BasisRepresentation::new(
            "reliability",
            StateVector::from_probability(0.9438).unwrap(),
            "topicality",
            StateVector::from_probability(0.1250).unwrap(),
        )
        .unwrap();
        let ch = change_of_basis(&rep).unwrap();
        assert!(close(ch.c_in_ab.a(), 0.5651, 1e-3));
        // Magnitude 0.8250; negative under the ψ̃ = b|A⟩ − a|B⟩ convention.
        assert!(close(ch.c_in_ab.b(), -0.8250, 1e-3));
    }

    #[test]
    fn change_of_basis_identity() {
        let e = StateVector::new(1.0, 0.0).unwrap();
        let rep = BasisRepresentation::new("x", e, "y", e).unwrap();
        let ch = change_of_basis(&rep).unwrap();
        assert_eq!((ch.c_in_ab.a(), ch.c_in_ab.b()), (1.0, 0.0));
        assert_eq!((ch.d_in_ab.a(), ch.d_in_ab.b()), (0.0, 1.0));
    }

    #[test]
    fn representation_requires_distinct_names() {
        let e = StateVector::new(1.0, 0.0).unwrap();
        assert!(BasisRepresentation::new("x", e, "x", e).is_err());
    }

    #[test]
    fn sequential_projection_examples() {
        let cross = 0.8449f64.powi(2);
        let t = StateVector::normalized(0.9487, 0.3162).unwrap();
        assert!(close(
            sequential_projection(t, cross).unwrap(),
            0.6425,
            1e-3
        ));
        let plus = StateVector::normalized(0.6325, 0.7746).unwrap();
        assert!(close(
            sequential_projection(plus, cross).unwrap(),
            0.2856,
            1e-3
        ));
        assert_eq!(sequential_projection(t, 0.0).unwrap(), 0.0);
        assert!(matches!(
            sequential_projection(t, 1.2),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn order_effect_examples() {
        let fx = order_effect(
            StateVector::from_probability(0.9438).unwrap(),
            StateVector::from_probability(0.1250).unwrap(),
        )
        .unwrap();
        assert!(close(fx.p_ba, 0.0399, 1e-3));
        assert!(close(fx.p_ab, 0.3014, 1e-3));
        assert!((7.4..=7.6).contains(&fx.ratio.unwrap()));

        let fx = order_effect(
            StateVector::from_probability(0.9).unwrap(),
            StateVector::from_probability(0.4).unwrap(),
        )
        .unwrap();
        assert!(close(fx.p_ab, 0.6425, 1e-3));
        assert!(close(fx.p_ba, 0.2856, 1e-3));
        assert!(close(fx.delta, 0.3569, 1e-3));

        let s = StateVector::from_probability(0.3).unwrap();
        let fx = order_effect(s, s).unwrap();
        assert_eq!(fx.delta, 0.0);
        assert_eq!(fx.ratio, Some(1.0));
    }

    #[test]
    fn ratio_undefined_at_zero() {
        let fx = order_effect(
            StateVector::new(1.0, 0.0).unwrap(),
            StateVector::new(0.0, 1.0).unwrap(),
        )
        .unwrap();
        assert_eq!(fx.cross_probability, 0.0);
        assert_eq!(fx.ratio, None);
    }
}
