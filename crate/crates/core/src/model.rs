//! Concrete local analytic Moufang loops as multiplication jets.
//!
//! Each model supplies a chart around the unit (placed at the origin) in
//! which the product becomes a jet vector `F` in `2r` variables: block 0
//! holds the left factor `g`, block 1 the right factor `h`. Built-ins:
//!
//! - `abelian`: `F = g + h`, everything degenerate;
//! - `heisenberg`: associative, non-abelian polynomial group law;
//! - `quaternion_chart`: unit quaternions in the imaginary-part chart,
//!   a Lie group whose chart still has curvature (nonlinear `u`, `v`);
//! - `octonion_chart`: unit octonions, genuinely nonassociative Moufang;
//! - `non_moufang`: a polynomial counterexample that satisfies the loop
//!   axioms but fails the Moufang identities.
//!
//! The chart for the unit-sphere models sends a point to the imaginary
//! part; the real part is recovered as `sqrt(1 - |imag|^2)`, whose series
//! has rational coefficients, so every jet stays exact.

use serde::{Deserialize, Serialize};

use crate::check::{CheckResult, IdentityCheck};
use crate::error::{Error, Result};
use crate::jet::{ExponentVector, Jet, JetVector};
use crate::octonion::SignedTable;
use crate::rational::{format_rational, parse_rational, rat};
use crate::tensor::determinant;
use crate::{order_cap, Rational, RationalJet, RationalJetVector};

use num_traits::{One, Zero};

/// Which built-in family a model belongs to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Abelian,
    Heisenberg,
    QuaternionChart,
    OctonionChart,
    CustomPolynomial(CustomModelSpec),
}

/// A charted local loop: a name, a dimension and a generator of the
/// multiplication jet to any requested order.
#[derive(Clone, Debug)]
pub struct LoopModel {
    name: String,
    dimension: usize,
    kind: ModelKind,
}

/// User-suppliable polynomial multiplication law. Exponent vectors have
/// length `2r` (blocks `g` then `h`); coefficients are exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CustomModelSpec {
    pub dimension: usize,
    /// One term list per component: `[[exponents...], "p/q"]` pairs.
    pub components: Vec<Vec<(Vec<u32>, String)>>,
}

impl LoopModel {
    pub fn abelian() -> Self {
        Self {
            name: "abelian".into(),
            dimension: 3,
            kind: ModelKind::Abelian,
        }
    }

    pub fn heisenberg() -> Self {
        Self {
            name: "heisenberg".into(),
            dimension: 3,
            kind: ModelKind::Heisenberg,
        }
    }

    pub fn quaternion_chart() -> Self {
        Self {
            name: "quaternion_chart".into(),
            dimension: 3,
            kind: ModelKind::QuaternionChart,
        }
    }

    pub fn octonion_chart() -> Self {
        Self {
            name: "octonion_chart".into(),
            dimension: 7,
            kind: ModelKind::OctonionChart,
        }
    }

    /// Polynomial loop that satisfies the axioms but violates the Moufang
    /// identities: `F = (g1+h1, g2+h2, g3+h3 + g1 h1 (g2 - h2))`.
    pub fn non_moufang() -> Self {
        let spec = CustomModelSpec {
            dimension: 3,
            components: vec![
                vec![
                    (vec![1, 0, 0, 0, 0, 0], "1".into()),
                    (vec![0, 0, 0, 1, 0, 0], "1".into()),
                ],
                vec![
                    (vec![0, 1, 0, 0, 0, 0], "1".into()),
                    (vec![0, 0, 0, 0, 1, 0], "1".into()),
                ],
                vec![
                    (vec![0, 0, 1, 0, 0, 0], "1".into()),
                    (vec![0, 0, 0, 0, 0, 1], "1".into()),
                    (vec![1, 1, 0, 1, 0, 0], "1".into()),
                    (vec![1, 0, 0, 1, 1, 0], "-1".into()),
                ],
            ],
        };
        Self::custom("non_moufang", spec).expect("built-in counterexample is valid")
    }

    /// Wraps a validated custom polynomial law.
    pub fn custom(name: &str, spec: CustomModelSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self::custom_unchecked(name, spec))
    }

    /// Wraps a custom law without load-time validation, so that the jet
    /// level axiom check itself can be exercised on broken input.
    pub(crate) fn custom_unchecked(name: &str, spec: CustomModelSpec) -> Self {
        Self {
            name: name.into(),
            dimension: spec.dimension,
            kind: ModelKind::CustomPolynomial(spec),
        }
    }

    /// Resolves a CLI model name: a built-in or `file:<path>` for a custom
    /// model JSON document.
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "abelian" => Ok(Self::abelian()),
            "heisenberg" => Ok(Self::heisenberg()),
            "quaternion_chart" => Ok(Self::quaternion_chart()),
            "octonion_chart" => Ok(Self::octonion_chart()),
            "non_moufang" => Ok(Self::non_moufang()),
            other => {
                if let Some(path) = other.strip_prefix("file:") {
                    Self::from_json_file(path)
                } else {
                    Err(Error::UnknownModel(other.to_string()))
                }
            }
        }
    }

    /// Loads a custom model from its JSON document.
    pub fn from_json_file(path: &str) -> Result<Self> {
        let raw = std::fs::read_to_string(path)?;
        let spec: CustomModelSpec = serde_json::from_str(&raw)?;
        let stem = std::path::Path::new(path)
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("custom");
        Self::custom(stem, spec)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    /// The signed table behind a sphere-chart model, if any.
    pub fn table(&self) -> Option<SignedTable> {
        match self.kind {
            ModelKind::QuaternionChart => Some(SignedTable::quaternion()),
            ModelKind::OctonionChart => Some(SignedTable::octonion()),
            _ => None,
        }
    }

    /// Materializes the multiplication jet `F^i = (gh)^i` in `2r`
    /// variables at the requested reliable order.
    pub fn multiplication_jet(&self, order: u32) -> Result<RationalJetVector> {
        if order < 1 {
            return Err(Error::OrderTooSmall {
                minimum: 1,
                got: order,
            });
        }
        let cap = order_cap();
        if order > cap {
            return Err(Error::OrderCapExceeded {
                requested: order,
                cap,
            });
        }
        match &self.kind {
            ModelKind::Abelian => Ok(linear_sum_jet(self.dimension, order)),
            ModelKind::Heisenberg => {
                let mut f = linear_sum_jet(3, order).into_components();
                let correction = RationalJet::monomial(6, order, vec![1, 0, 0, 0, 1, 0], rat(1, 1));
                f[2] = f[2].try_add(&correction)?;
                JetVector::new(f)
            }
            ModelKind::QuaternionChart => chart_jet(&SignedTable::quaternion(), order),
            ModelKind::OctonionChart => chart_jet(&SignedTable::octonion(), order),
            ModelKind::CustomPolynomial(spec) => spec.jet(order),
        }
    }

    /// Solves `F(g, inv(g)) = 0` degree by degree. For the Moufang
    /// built-ins the result is also a left inverse; a general loop can
    /// have distinct one-sided inverses.
    pub fn inverse_jet(&self, order: u32) -> Result<RationalJetVector> {
        let f = self.multiplication_jet(order)?;
        let r = self.dimension;
        let id = JetVector::identity_block(r, 0, r, order);
        let mut inv = id.neg();
        for degree in 2..=order {
            let residual = compose_product(&f, &id, &inv)?;
            let correction = homogeneous_part(&residual, degree);
            inv = inv.try_sub(&correction)?;
        }
        let residual = compose_product(&f, &id, &inv)?;
        assert!(
            residual.is_zero(),
            "inverse solve must annihilate F(g, inv(g))"
        );
        Ok(inv)
    }

    /// Verifies the unit law as a jet identity and the nondegeneracy of
    /// the linear coefficient blocks (`det u(e) = det v(e) = 1`).
    pub fn check_loop_axioms(&self, order: u32) -> Result<CheckResult> {
        let f = self.multiplication_jet(order)?;
        let r = self.dimension;
        let mut check = IdentityCheck::new("loop_axioms", &self.name, order);

        let id = JetVector::identity_block(r, 0, r, order);
        let zero: Vec<RationalJet> = (0..r).map(|_| Jet::zero(r, order)).collect();

        let g_side = f.compose(
            &id.components()
                .iter()
                .cloned()
                .chain(zero.iter().cloned())
                .collect::<Vec<_>>(),
        )?;
        check.equal_jets("unit_right", &g_side, &id);

        let h_side = f.compose(
            &zero
                .iter()
                .cloned()
                .chain(id.components().iter().cloned())
                .collect::<Vec<_>>(),
        )?;
        check.equal_jets("unit_left", &h_side, &id);

        for (sub, offset) in [("nondegenerate_u", 0usize), ("nondegenerate_v", r)] {
            let matrix: Vec<Vec<Rational>> = (0..r)
                .map(|i| {
                    (0..r)
                        .map(|j| {
                            f.component(i)
                                .coefficient(&unit_exponents(2 * r, offset + j))
                                .expect("linear coefficients are within order")
                        })
                        .collect()
                })
                .collect();
            let det = determinant(&matrix);
            check.equal_constants(sub, 0, &[], &det, &Rational::one());
        }

        Ok(check.finish())
    }

    /// Composes both sides of the three Moufang identities and of left/right
    /// alternativity and flexibility, asserting exact jet equality.
    pub fn check_moufang_identities(&self, order: u32) -> Result<CheckResult> {
        if order < 2 {
            return Err(Error::CheckNeedsOrder {
                check: "moufang_identities",
                needed: 2,
                got: order,
            });
        }
        let f = self.multiplication_jet(order)?;
        let r = self.dimension;
        let mut check = IdentityCheck::new("moufang_identities", &self.name, order);

        // three-variable identities in blocks (g, h, k)
        let g = JetVector::identity_block(3 * r, 0, r, order);
        let h = JetVector::identity_block(3 * r, r, r, order);
        let k = JetVector::identity_block(3 * r, 2 * r, r, order);
        let mul = |a: &RationalJetVector, b: &RationalJetVector| compose_product(&f, a, b);

        // g(h . gk) = (gh . g)k
        let lhs = mul(&g, &mul(&h, &mul(&g, &k)?)?)?;
        let rhs = mul(&mul(&mul(&g, &h)?, &g)?, &k)?;
        check.equal_jets("m_a", &lhs, &rhs);

        // (kg . h)g = k(g . hg)
        let lhs = mul(&mul(&mul(&k, &g)?, &h)?, &g)?;
        let rhs = mul(&k, &mul(&g, &mul(&h, &g)?)?)?;
        check.equal_jets("m_b", &lhs, &rhs);

        // (gh)(kg) = g(hk . g)
        let lhs = mul(&mul(&g, &h)?, &mul(&k, &g)?)?;
        let rhs = mul(&g, &mul(&mul(&h, &k)?, &g)?)?;
        check.equal_jets("m_c", &lhs, &rhs);

        // two-variable identities in blocks (g, h)
        let g = JetVector::identity_block(2 * r, 0, r, order);
        let h = JetVector::identity_block(2 * r, r, r, order);

        let lhs = mul(&g, &mul(&g, &h)?)?;
        let rhs = mul(&mul(&g, &g)?, &h)?;
        check.equal_jets("alt_left", &lhs, &rhs);

        let lhs = mul(&mul(&h, &g)?, &g)?;
        let rhs = mul(&h, &mul(&g, &g)?)?;
        check.equal_jets("alt_right", &lhs, &rhs);

        let lhs = mul(&mul(&g, &h)?, &g)?;
        let rhs = mul(&g, &mul(&h, &g)?)?;
        check.equal_jets("flexibility", &lhs, &rhs);

        Ok(check.finish())
    }
}

/// `F(a, b)`: composes a `2r`-variable multiplication jet with two
/// argument jet vectors living in a common space.
pub fn compose_product(
    f: &RationalJetVector,
    a: &RationalJetVector,
    b: &RationalJetVector,
) -> Result<RationalJetVector> {
    f.apply(&[a, b])
}

fn homogeneous_part(v: &RationalJetVector, degree: u32) -> RationalJetVector {
    JetVector::new(
        v.components()
            .iter()
            .map(|c| c.homogeneous_part(degree))
            .collect(),
    )
    .expect("components stay consistent")
}

fn unit_exponents(len: usize, var: usize) -> ExponentVector {
    ExponentVector::unit(len, var)
}

fn linear_sum_jet(r: usize, order: u32) -> RationalJetVector {
    let components = (0..r)
        .map(|i| {
            Jet::from_terms(
                2 * r,
                order,
                vec![
                    (unit_vec(2 * r, i), rat(1, 1)),
                    (unit_vec(2 * r, r + i), rat(1, 1)),
                ],
            )
        })
        .collect();
    JetVector::new(components).expect("components stay consistent")
}

fn unit_vec(len: usize, var: usize) -> Vec<u32> {
    let mut v = vec![0u32; len];
    v[var] = 1;
    v
}

/// Taylor series of `sqrt(1 - t)` as a one-variable jet.
fn sqrt_one_minus_series(order: u32) -> RationalJet {
    let mut coeff = Rational::one();
    let mut terms = vec![(vec![0u32], coeff.clone())];
    for n in 1..=order {
        // a_n = a_{n-1} * (2n - 3) / (2n)
        coeff *= rat(2 * i64::from(n) - 3, 2 * i64::from(n));
        terms.push((vec![n], coeff.clone()));
    }
    Jet::from_terms(1, order, terms)
}

/// Imaginary-part chart of the unit sphere of a normed algebra:
/// `F^i = sqrt(1-|g|^2) h^i + sqrt(1-|h|^2) g^i + sum t^i_jk g^j h^k`.
fn chart_jet(table: &SignedTable, order: u32) -> Result<RationalJetVector> {
    let r = table.dim - 1;
    let vars = 2 * r;

    let norm2 = |offset: usize| -> RationalJet {
        Jet::from_terms(
            vars,
            order,
            (0..r).map(|v| {
                let mut e = vec![0u32; vars];
                e[offset + v] = 2;
                (e, rat(1, 1))
            }),
        )
    };

    let sqrt = sqrt_one_minus_series(order);
    let x0_g = sqrt.substitute(&[norm2(0)])?;
    let x0_h = sqrt.substitute(&[norm2(r)])?;

    let mut components: Vec<RationalJet> = (0..r)
        .map(|i| {
            let h_i = Jet::variable(vars, order, r + i);
            let g_i = Jet::variable(vars, order, i);
            x0_g.try_mul(&h_i)?.try_add(&x0_h.try_mul(&g_i)?)
        })
        .collect::<Result<_>>()?;

    for j in 1..table.dim {
        for k in 1..table.dim {
            if j == k {
                continue;
            }
            let target = table.index[j][k];
            debug_assert_ne!(target, 0);
            let sign = i64::from(table.sign[j][k]);
            let mut e = vec![0u32; vars];
            e[j - 1] = 1;
            e[r + k - 1] = 1;
            let term = Jet::monomial(vars, order, e, rat(sign, 1));
            components[target - 1] = components[target - 1].try_add(&term)?;
        }
    }

    JetVector::new(components)
}

impl CustomModelSpec {
    /// Structural validation plus the unit law, checked on the exact
    /// polynomial data (not a truncation).
    pub fn validate(&self) -> Result<()> {
        let r = self.dimension;
        if r == 0 {
            return Err(Error::InvalidModel("dimension must be positive".into()));
        }
        if self.components.len() != r {
            return Err(Error::InvalidModel(format!(
                "expected {} component term lists, got {}",
                r,
                self.components.len()
            )));
        }
        for (i, terms) in self.components.iter().enumerate() {
            for (exponents, raw) in terms {
                if exponents.len() != 2 * r {
                    return Err(Error::InvalidModel(format!(
                        "component {i}: exponent vector length {} != 2r = {}",
                        exponents.len(),
                        2 * r
                    )));
                }
                parse_rational(raw)?;
            }
            self.validate_unit_slice(i, 0)?;
            self.validate_unit_slice(i, r)?;
        }
        Ok(())
    }

    /// Checks that setting the other block to zero leaves exactly the
    /// identity polynomial on the block starting at `offset`.
    fn validate_unit_slice(&self, component: usize, offset: usize) -> Result<()> {
        let r = self.dimension;
        let other = if offset == 0 { r } else { 0 };
        let mut collected: std::collections::BTreeMap<Vec<u32>, Rational> = Default::default();
        for (exponents, raw) in &self.components[component] {
            if exponents[other..other + r].iter().any(|&e| e > 0) {
                continue;
            }
            let coeff = parse_rational(raw)?;
            let entry = collected.entry(exponents.clone()).or_insert_with(Rational::zero);
            *entry += coeff;
        }
        collected.retain(|_, v| !v.is_zero());
        let mut expected = vec![0u32; 2 * r];
        expected[offset + component] = 1;
        let ok = collected.len() == 1
            && collected
                .get(&expected)
                .map(|c| c == &Rational::one())
                .unwrap_or(false);
        if !ok {
            return Err(Error::UnitLawViolation {
                component,
                detail: format!(
                    "restriction to block at offset {offset} is {:?}, expected the identity",
                    collected
                        .iter()
                        .map(|(e, c)| (e.clone(), format_rational(c)))
                        .collect::<Vec<_>>()
                ),
            });
        }
        Ok(())
    }

    fn jet(&self, order: u32) -> Result<RationalJetVector> {
        let r = self.dimension;
        let components = self
            .components
            .iter()
            .map(|terms| {
                let parsed: Result<Vec<(Vec<u32>, Rational)>> = terms
                    .iter()
                    .map(|(e, raw)| Ok((e.clone(), parse_rational(raw)?)))
                    .collect();
                Ok(Jet::from_terms(2 * r, order, parsed?))
            })
            .collect::<Result<Vec<_>>>()?;
        JetVector::new(components)
    }

    /// Captures a materialized multiplication jet as a polynomial spec,
    /// e.g. to perturb a coefficient and feed the result back in.
    pub fn from_jets(f: &RationalJetVector) -> Self {
        let dimension = f.dimension();
        let components = f
            .components()
            .iter()
            .map(|jet| {
                jet.terms()
                    .map(|(e, c)| (e.exponents().to_vec(), format_rational(c)))
                    .collect()
            })
            .collect();
        Self {
            dimension,
            components,
        }
    }
}

/// Evaluates the chart multiplication numerically: embeds both imaginary
/// parts on the unit sphere, multiplies via the signed table, projects
/// back to the chart.
pub fn chart_multiply_numeric(table: &SignedTable, g: &[f64], h: &[f64]) -> Vec<f64> {
    let r = table.dim - 1;
    assert_eq!(g.len(), r);
    assert_eq!(h.len(), r);
    let lift = |v: &[f64]| -> Vec<f64> {
        let norm2: f64 = v.iter().map(|x| x * x).sum();
        let mut out = Vec::with_capacity(r + 1);
        out.push((1.0 - norm2).sqrt());
        out.extend_from_slice(v);
        out
    };
    let prod = table.multiply(&lift(g), &lift(h));
    prod[1..].to_vec()
}
