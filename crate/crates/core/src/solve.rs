//! Method selection for a single `(A, Delta)` instance.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{full_search_result, radius_allones};
use crate::matrix::{check_same_dim, RadiusMatrix, SquareMatrix};
use crate::orthant::{radius_orthant_search, OrthantTrace};
use crate::radius::{Method, RadiusResult, RadiusValue, Tolerances};
use crate::special::{detect_class, radius_inverse_nonnegative, radius_totally_positive, ClassKind, ClassTag};
use crate::tridiagonal::{tridiag_radius, TridiagonalMatrix, TridiagonalRadius};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodChoice {
    /// Closed form when the class is recognised, orthant search otherwise.
    Auto,
    Full,
    Orthant,
    Tridiagonal,
    ClosedForm,
}

impl FromStr for MethodChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "auto" => MethodChoice::Auto,
            "full" | "full-search" => MethodChoice::Full,
            "orthant" | "orthant-search" => MethodChoice::Orthant,
            "tridiag" | "tridiagonal" => MethodChoice::Tridiagonal,
            "closed-form" => MethodChoice::ClosedForm,
            _ => return Err(Error::Parse(format!("unknown method {s:?}"))),
        })
    }
}

impl fmt::Display for MethodChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MethodChoice::Auto => "auto",
            MethodChoice::Full => "full",
            MethodChoice::Orthant => "orthant",
            MethodChoice::Tridiagonal => "tridiag",
            MethodChoice::ClosedForm => "closed-form",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Computation {
    pub result: RadiusResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<ClassTag>,
    #[serde(skip)]
    pub trace: Option<OrthantTrace>,
}

impl Computation {
    fn plain(result: RadiusResult) -> Self {
        Computation { result, class: None, trace: None }
    }
}

fn method_tag(choice: MethodChoice) -> Method {
    match choice {
        MethodChoice::Full => Method::FullSearch,
        MethodChoice::Tridiagonal => Method::Tridiagonal,
        MethodChoice::Auto | MethodChoice::Orthant | MethodChoice::ClosedForm => Method::OrthantSearch,
    }
}

fn closed_form(a: &SquareMatrix, delta: &RadiusMatrix, class: &ClassTag, tol: &Tolerances) -> Result<Option<RadiusResult>> {
    Ok(match class.kind {
        ClassKind::TotallyPositive => Some(radius_totally_positive(a, delta, tol)?),
        ClassKind::InverseNonnegative => Some(radius_inverse_nonnegative(a, delta, tol)?),
        ClassKind::Neither => None,
    })
}

fn orthant(a: &SquareMatrix, delta: &RadiusMatrix, tol: &Tolerances, class: Option<ClassTag>) -> Result<Computation> {
    let trace = radius_orthant_search(a, delta, tol)?;
    Ok(Computation { result: trace.result.clone(), class, trace: Some(trace) })
}

/// Radius of `(A, Delta)` by the chosen method.
///
/// A singular centre yields zero and an infinite radius is returned as a
/// value rather than an error.
pub fn radius(a: &SquareMatrix, delta: &RadiusMatrix, choice: MethodChoice, tol: &Tolerances) -> Result<Computation> {
    check_same_dim(a, delta)?;
    tol.validate()?;
    let outcome = match choice {
        MethodChoice::Full if delta.is_all_ones() && a.n() > tol.full_search_cap => {
            radius_allones(a, tol).map(Computation::plain)
        }
        MethodChoice::Full => full_search_result(a, delta, tol).map(Computation::plain),
        MethodChoice::Orthant => orthant(a, delta, tol, None),
        MethodChoice::Tridiagonal => {
            let t = TridiagonalMatrix::from_dense(a)?;
            let d = TridiagonalRadius::from_dense(delta)?;
            tridiag_radius(&t, &d, tol.eps_bisect, tol).map(Computation::plain)
        }
        MethodChoice::ClosedForm => detect_class(a, tol).and_then(|class| {
            match closed_form(a, delta, &class, tol)? {
                Some(result) => Ok(Computation { result, class: Some(class), trace: None }),
                None => Err(Error::ClassMismatch(class.evidence)),
            }
        }),
        MethodChoice::Auto => detect_class(a, tol).and_then(|class| match closed_form(a, delta, &class, tol)? {
            Some(result) => Ok(Computation { result, class: Some(class), trace: None }),
            None => orthant(a, delta, tol, Some(class)),
        }),
    };
    match outcome {
        Err(Error::SingularInput) => Ok(Computation::plain(
            RadiusResult::new(RadiusValue::Finite(0.0), method_tag(choice), 0.0)
                .with_diagnostic("singular_input", 1.0),
        )),
        Err(Error::InfiniteRadius) => Ok(Computation::plain(RadiusResult::new(
            RadiusValue::Infinite,
            method_tag(choice),
            0.0,
        ))),
        other => other,
    }
}
