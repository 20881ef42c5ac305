//! Order-effect explanation for a pair of top-ranked documents.
//!
//! Both documents live in one Hilbert space. Each relevance dimension is a
//! basis of that space; a document's state in a dimension's basis has
//! amplitude `√p` on the "relevant" vector, where `p` is its profile entry.
//! Document 1 is judged `dim_second` then `dim_first`; document 2 is judged
//! `dim_first` then `dim_second`. A large gap between the two probabilities
//! accounts for the rank-2 document being preferred despite an identical
//! profile.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{
    change_of_basis, probability_ratio, sequential_projection, BasisRepresentation, StateVector,
};
use crate::profile::{Dimension, DimensionalProfile};

/// Both sequential judgment orders for one document.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DocumentOrders {
    pub first_then_second: f64,
    pub second_then_first: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Explanation {
    pub query_id: String,
    pub dim_first: Dimension,
    pub dim_second: Dimension,
    /// `|⟨dim_first|dim_second⟩|²`, computed from document 1.
    pub cross_probability: f64,
    /// Document 2 judged `dim_first` then `dim_second`.
    pub p_forward: f64,
    /// Document 1 judged `dim_second` then `dim_first`.
    pub p_reverse: f64,
    pub ratio: Option<f64>,
    pub d1: DocumentOrders,
    pub d2: DocumentOrders,
    pub degenerate: bool,
}

/// The highest-scoring dimension; ties go to the earliest in HINRSTU order.
pub fn preferred_dimension(p: &DimensionalProfile) -> Dimension {
    Dimension::ALL
        .into_iter()
        .fold(Dimension::Habit, |best, d| {
            if p.get(d) > p.get(best) {
                d
            } else {
                best
            }
        })
}

/// The lowest-scoring dimension; ties go to the earliest in HINRSTU order.
pub fn least_dimension(p: &DimensionalProfile) -> Dimension {
    Dimension::ALL
        .into_iter()
        .fold(Dimension::Habit, |worst, d| {
            if p.get(d) < p.get(worst) {
                d
            } else {
                worst
            }
        })
}

fn orders(
    p: &DimensionalProfile,
    first: Dimension,
    second: Dimension,
    cross: f64,
) -> Result<DocumentOrders> {
    Ok(DocumentOrders {
        first_then_second: sequential_projection(
            StateVector::from_probability(p.get(first))?,
            cross,
        )?,
        second_then_first: sequential_projection(
            StateVector::from_probability(p.get(second))?,
            cross,
        )?,
    })
}

fn cross_probability(d1: &DimensionalProfile, first: Dimension, second: Dimension) -> Result<f64> {
    let rep = BasisRepresentation::new(
        first.key(),
        StateVector::from_probability(d1.get(first))?,
        second.key(),
        StateVector::from_probability(d1.get(second))?,
    )?;
    Ok(change_of_basis(&rep)?.cross_probability().min(1.0))
}

pub fn explain(
    query_id: impl Into<String>,
    d1: &DimensionalProfile,
    d2: &DimensionalProfile,
    dim_first: Dimension,
    dim_second: Dimension,
) -> Result<Explanation> {
    if dim_first == dim_second {
        return Err(Error::Contract(format!(
            "explanation needs two different dimensions, got {dim_first} twice"
        )));
    }
    let cross = cross_probability(d1, dim_first, dim_second)?;
    let o1 = orders(d1, dim_first, dim_second, cross)?;
    let o2 = orders(d2, dim_first, dim_second, cross)?;
    Ok(Explanation {
        query_id: query_id.into(),
        dim_first,
        dim_second,
        cross_probability: cross,
        p_forward: o2.first_then_second,
        p_reverse: o1.second_then_first,
        ratio: probability_ratio(o2.first_then_second, o1.second_then_first),
        d1: o1,
        d2: o2,
        degenerate: false,
    })
}

/// Picks document 1's preferred and least-scored dimensions and explains.
///
/// When every entry of document 1 is equal no pair stands out: the result
/// uses Habit/Interest, is flagged degenerate, and reports document 1's
/// (equal) order probabilities with ratio 1.
pub fn explain_auto(
    query_id: impl Into<String>,
    d1: &DimensionalProfile,
    d2: &DimensionalProfile,
) -> Result<Explanation> {
    let first = preferred_dimension(d1);
    let second = least_dimension(d1);
    if first != second {
        return explain(query_id, d1, d2, first, second);
    }
    let (first, second) = (Dimension::Habit, Dimension::Interest);
    let mut e = explain(query_id, d1, d2, first, second)?;
    e.p_forward = e.d1.first_then_second;
    e.p_reverse = e.d1.second_then_first;
    e.ratio = Some(1.0);
    e.degenerate = true;
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::build_profile;

    const TWIN_ROW: [f64; 7] = [0.3040, 0.1251, 0.0000, 0.9438, 0.1250, 0.1250, 0.5619];

    fn twins() -> DimensionalProfile {
        build_profile(&TWIN_ROW).unwrap()
    }

    #[test]
    fn preferred_dimension_examples() {
        assert_eq!(preferred_dimension(&twins()), Dimension::Reliability);
        assert_eq!(
            preferred_dimension(&build_profile(&[0.4; 7]).unwrap()),
            Dimension::Habit
        );
        let mut u = [0.0; 7];
        u[6] = 1.0;
        assert_eq!(
            preferred_dimension(&build_profile(&u).unwrap()),
            Dimension::Understandability
        );
    }

    #[test]
    fn reliability_topicality_explanation() {
        let p = twins();
        let e = explain("q", &p, &p, Dimension::Reliability, Dimension::Topicality).unwrap();
        assert!((e.p_reverse - 0.0399).abs() < 1e-3, "{e:?}");
        assert!((e.p_forward - 0.3014).abs() < 1e-3, "{e:?}");
        let r = e.ratio.unwrap();
        assert!((7.4..=7.6).contains(&r), "{r}");
        assert!((e.cross_probability - 0.5651f64.powi(2)).abs() < 1e-3);
    }

    #[test]
    fn equal_entries_cancel_the_order_effect() {
        let mut v = [0.2; 7];
        v[1] = 0.5;
        v[4] = 0.5;
        let p = build_profile(&v).unwrap();
        let e = explain("q", &p, &p, Dimension::Interest, Dimension::Scope).unwrap();
        assert_eq!(e.p_forward, e.p_reverse);
        assert_eq!(e.ratio, Some(1.0));
    }

    #[test]
    fn aligned_states_have_zero_overlap() {
        let mut v = [0.3; 7];
        v[0] = 1.0;
        v[1] = 0.0;
        let p = build_profile(&v).unwrap();
        let e = explain("q", &p, &p, Dimension::Habit, Dimension::Interest).unwrap();
        assert_eq!(e.cross_probability, 0.0);
        assert_eq!((e.p_forward, e.p_reverse), (0.0, 0.0));
        assert_eq!(e.ratio, None);
    }

    #[test]
    fn same_dimension_is_rejected() {
        let p = twins();
        assert!(explain("q", &p, &p, Dimension::Scope, Dimension::Scope).is_err());
    }

    #[test]
    fn auto_pair_selection() {
        let p = twins();
        let e = explain_auto("q", &p, &p).unwrap();
        assert_eq!(
            (e.dim_first, e.dim_second),
            (Dimension::Reliability, Dimension::Novelty)
        );

        let p = build_profile(&[0.9, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1]).unwrap();
        let e = explain_auto("q", &p, &p).unwrap();
        assert_eq!(
            (e.dim_first, e.dim_second),
            (Dimension::Habit, Dimension::Interest)
        );
        assert!(!e.degenerate);

        let flat = build_profile(&[0.3; 7]).unwrap();
        let other = twins();
        let e = explain_auto("q", &flat, &other).unwrap();
        assert!(e.degenerate);
        assert_eq!(e.ratio, Some(1.0));
        assert_eq!(e.p_forward, e.p_reverse);
    }
}
