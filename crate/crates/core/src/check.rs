//! Outcome of one identity verification.

use serde::{Deserialize, Serialize};

use crate::rational::format_rational;
use crate::{Rational, RationalJetVector};

/// A reproducible witness for a failed identity: the first offending
/// coefficient in canonical (component, graded-lex monomial) order.
///
/// For checks over constant tensors and tangent vectors, `exponents`
/// carries the lower-index tuple of the offending entry instead of a
/// monomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureWitness {
    pub component: usize,
    pub exponents: Vec<u32>,
    pub lhs: String,
    pub rhs: String,
}

impl FailureWitness {
    pub fn new(component: usize, exponents: Vec<u32>, lhs: &Rational, rhs: &Rational) -> Self {
        Self {
            component,
            exponents,
            lhs: format_rational(lhs),
            rhs: format_rational(rhs),
        }
    }
}

/// Result of verifying one identity on one model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    /// Check name; a failing sub-identity is appended in brackets,
    /// e.g. `moufang_identities[m_b]`.
    #[serde(rename = "identity")]
    pub identity_name: String,
    pub model: String,
    pub requested_order: u32,
    /// Reliable order at which the equality was asserted (0 for checks on
    /// constant tensor data).
    pub verified_order: u32,
    pub passed: bool,
    pub first_failure: Option<FailureWitness>,
}

impl CheckResult {
    pub fn pass(name: &str, model: &str, requested_order: u32, verified_order: u32) -> Self {
        Self {
            identity_name: name.to_string(),
            model: model.to_string(),
            requested_order,
            verified_order,
            passed: true,
            first_failure: None,
        }
    }

    pub fn fail(
        name: &str,
        model: &str,
        requested_order: u32,
        verified_order: u32,
        witness: FailureWitness,
    ) -> Self {
        Self {
            identity_name: name.to_string(),
            model: model.to_string(),
            requested_order,
            verified_order,
            passed: false,
            first_failure: Some(witness),
        }
    }
}

/// Compares a family of (sub-identity name, lhs, rhs) jet-vector pairs and
/// aggregates them into one result. The first failing sub-identity (in the
/// given order) supplies the witness and its name is recorded as
/// `check[sub]`.
pub struct IdentityCheck<'a> {
    check: &'a str,
    model: &'a str,
    requested_order: u32,
    verified_order: Option<u32>,
    failure: Option<(String, FailureWitness)>,
}

impl<'a> IdentityCheck<'a> {
    pub fn new(check: &'a str, model: &'a str, requested_order: u32) -> Self {
        Self {
            check,
            model,
            requested_order,
            verified_order: None,
            failure: None,
        }
    }

    /// Asserts `lhs == rhs` at their common reliable order.
    pub fn equal_jets(&mut self, sub: &str, lhs: &RationalJetVector, rhs: &RationalJetVector) {
        let order = lhs.order().min(rhs.order());
        self.verified_order = Some(match self.verified_order {
            Some(o) => o.min(order),
            None => order,
        });
        if self.failure.is_some() {
            return;
        }
        if let Some((component, exponents, l, r)) =
            lhs.truncate_to(order).first_difference(&rhs.truncate_to(order))
        {
            self.failure = Some((
                sub.to_string(),
                FailureWitness::new(component, exponents.exponents().to_vec(), &l, &r),
            ));
        }
    }

    /// Asserts a jet vector is identically zero at its reliable order.
    pub fn zero_jets(&mut self, sub: &str, lhs: &RationalJetVector) {
        let zero = RationalJetVector::zero(lhs.dimension(), lhs.num_vars(), lhs.order());
        self.equal_jets(sub, lhs, &zero);
    }

    /// Asserts equality of two constant tensor entries, identified by an
    /// index tuple recorded as the witness "exponents".
    pub fn equal_constants(
        &mut self,
        sub: &str,
        component: usize,
        indices: &[usize],
        lhs: &Rational,
        rhs: &Rational,
    ) {
        if self.verified_order.is_none() {
            self.verified_order = Some(0);
        }
        if self.failure.is_some() || lhs == rhs {
            return;
        }
        self.failure = Some((
            sub.to_string(),
            FailureWitness::new(
                component,
                indices.iter().map(|&i| i as u32).collect(),
                lhs,
                rhs,
            ),
        ));
    }

    pub fn finish(self) -> CheckResult {
        let verified_order = self.verified_order.unwrap_or(0);
        match self.failure {
            None => CheckResult::pass(self.check, self.model, self.requested_order, verified_order),
            Some((sub, witness)) => CheckResult::fail(
                &format!("{}[{}]", self.check, sub),
                self.model,
                self.requested_order,
                verified_order,
                witness,
            ),
        }
    }
}
