//! The tangent algebra of a charted loop: bracket, Jacobiator, trilinear
//! product and the Mal'tsev/Akivis identity checks on constant tensors.

use num_traits::Zero;

use crate::check::{CheckResult, IdentityCheck};
use crate::error::{Error, Result};
use crate::rational::rat;
use crate::tensor::{Tensor3, Tensor4};
use crate::{associator::TensorExport, Rational};

/// Element of the tangent space, exact rational components.
pub type TangentVector = Vec<Rational>;

/// Bracket constants `c^i_jk` plus, optionally, the third-order associator
/// tensor `l^i_jkl` that defines the trilinear product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraConstants {
    dimension: usize,
    c: Tensor3,
    l3: Option<Tensor4>,
}

impl AlgebraConstants {
    pub fn new(c: Tensor3, l3: Option<Tensor4>) -> Result<Self> {
        let dimension = c.dim();
        if let Some(t) = &l3 {
            if t.dim() != dimension {
                return Err(Error::InvalidModel(
                    "l3 dimension does not match c".into(),
                ));
            }
        }
        // bracket constants must be antisymmetric
        for i in 0..dimension {
            for j in 0..dimension {
                for k in 0..dimension {
                    if c.get(i, j, k).clone() + c.get(i, k, j).clone() != Rational::zero() {
                        return Err(Error::InvalidModel(format!(
                            "c^{i}_{j}{k} is not antisymmetric in its lower indices"
                        )));
                    }
                }
            }
        }
        Ok(Self { dimension, c, l3 })
    }

    pub fn from_export(export: &TensorExport) -> Result<Self> {
        Self::new(export.c_tensor()?, export.l3_tensor()?)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn c(&self) -> &Tensor3 {
        &self.c
    }

    pub fn l3(&self) -> Option<&Tensor4> {
        self.l3.as_ref()
    }

    pub fn basis(&self, j: usize) -> TangentVector {
        (0..self.dimension)
            .map(|i| if i == j { rat(1, 1) } else { Rational::zero() })
            .collect()
    }

    fn check_dim(&self, x: &TangentVector) -> Result<()> {
        if x.len() != self.dimension {
            return Err(Error::VariableCountMismatch {
                left: self.dimension,
                right: x.len(),
            });
        }
        Ok(())
    }

    /// `[x,y]^i = c^i_jk x^j y^k`.
    pub fn bracket(&self, x: &TangentVector, y: &TangentVector) -> Result<TangentVector> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        let r = self.dimension;
        let mut out = vec![Rational::zero(); r];
        for i in 0..r {
            for j in 0..r {
                if x[j].is_zero() {
                    continue;
                }
                for k in 0..r {
                    let c = self.c.get(i, j, k);
                    if c.is_zero() || y[k].is_zero() {
                        continue;
                    }
                    out[i] += c.clone() * x[j].clone() * y[k].clone();
                }
            }
        }
        Ok(out)
    }

    /// `J(x,y,z) = [x,[y,z]] + [y,[z,x]] + [z,[x,y]]`.
    pub fn jacobiator(
        &self,
        x: &TangentVector,
        y: &TangentVector,
        z: &TangentVector,
    ) -> Result<TangentVector> {
        let a = self.bracket(x, &self.bracket(y, z)?)?;
        let b = self.bracket(y, &self.bracket(z, x)?)?;
        let c = self.bracket(z, &self.bracket(x, y)?)?;
        Ok(add3(&a, &b, &c))
    }

    /// Trilinear product `(x,y,z)^i = l^i_jkl x^j y^k z^l`.
    pub fn akivis_product(
        &self,
        x: &TangentVector,
        y: &TangentVector,
        z: &TangentVector,
    ) -> Result<TangentVector> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        self.check_dim(z)?;
        let l3 = self.l3.as_ref().ok_or(Error::MissingThirdOrder)?;
        let r = self.dimension;
        let mut out = vec![Rational::zero(); r];
        for i in 0..r {
            for j in 0..r {
                if x[j].is_zero() {
                    continue;
                }
                for k in 0..r {
                    if y[k].is_zero() {
                        continue;
                    }
                    for l in 0..r {
                        let t = l3.get(i, j, k, l);
                        if t.is_zero() || z[l].is_zero() {
                            continue;
                        }
                        out[i] += t.clone() * x[j].clone() * y[k].clone() * z[l].clone();
                    }
                }
            }
        }
        Ok(out)
    }

    /// Evaluation set for identities quadratic in one argument: all basis
    /// vectors plus all sums of two distinct basis vectors.
    fn quadratic_probe_set(&self) -> Vec<TangentVector> {
        let r = self.dimension;
        let mut out: Vec<TangentVector> = (0..r).map(|j| self.basis(j)).collect();
        for j in 0..r {
            for m in j + 1..r {
                let mut v = self.basis(j);
                v[m] = rat(1, 1);
                out.push(v);
            }
        }
        out
    }

    /// The four-term Mal'tsev identity
    /// `[[x,y],[z,x]] + [[[x,y],z],x] + [[[y,z],x],x] + [[[z,x],x],y] = 0`
    /// evaluated exhaustively on basis triples and, since the identity is
    /// quadratic in `x`, additionally on basis sums substituted for `x`;
    /// plus the corrected Sagle form `[J(x,y,z),x] = J(x,y,[x,z])` on the
    /// same set.
    pub fn check_malcev_identity(&self, model: &str) -> Result<CheckResult> {
        let mut check = IdentityCheck::new("malcev", model, 0);
        let xs = self.quadratic_probe_set();
        let r = self.dimension;

        'outer: for (xi, x) in xs.iter().enumerate() {
            for j in 0..r {
                let y = self.basis(j);
                for k in 0..r {
                    let z = self.basis(k);

                    let xy = self.bracket(x, &y)?;
                    let zx = self.bracket(&z, x)?;
                    let yz = self.bracket(&y, &z)?;
                    let t1 = self.bracket(&xy, &zx)?;
                    let t2 = self.bracket(&self.bracket(&xy, &z)?, x)?;
                    let t3 = self.bracket(&self.bracket(&yz, x)?, x)?;
                    let t4 = self.bracket(&self.bracket(&zx, x)?, &y)?;
                    let total = add4(&t1, &t2, &t3, &t4);
                    if let Some(i) = first_nonzero(&total) {
                        check.equal_constants(
                            "four_term",
                            i,
                            &[xi, j, k],
                            &total[i],
                            &Rational::zero(),
                        );
                        break 'outer;
                    }

                    // corrected Sagle form
                    let lhs = self.bracket(&self.jacobiator(x, &y, &z)?, x)?;
                    let rhs = self.jacobiator(x, &y, &self.bracket(x, &z)?)?;
                    for i in 0..r {
                        if lhs[i] != rhs[i] {
                            check.equal_constants("sagle", i, &[xi, j, k], &lhs[i], &rhs[i]);
                            break 'outer;
                        }
                    }
                }
            }
        }

        Ok(check.finish())
    }

    /// Whether the identity exactly as printed with a repeated argument,
    /// `[J(x,y,x),x] = J(x,y,[x,z])`, holds on the evaluation set. The
    /// left side vanishes identically, so this holds iff `J(x,y,[x,z])`
    /// is always zero - true for Lie constants, false in general.
    pub fn printed_sagle_holds(&self) -> Result<bool> {
        let r = self.dimension;
        for x in self.quadratic_probe_set() {
            for j in 0..r {
                let y = self.basis(j);
                for k in 0..r {
                    let z = self.basis(k);
                    let rhs = self.jacobiator(&x, &y, &self.bracket(&x, &z)?)?;
                    if first_nonzero(&rhs).is_some() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Jacobi identity `J = 0` on all basis triples (holds exactly for
    /// Lie constants, fails for the octonion constants).
    pub fn check_jacobi_identity(&self, model: &str) -> Result<CheckResult> {
        let mut check = IdentityCheck::new("jacobi", model, 0);
        let r = self.dimension;
        'outer: for j in 0..r {
            for k in 0..r {
                for l in 0..r {
                    let jac = self.jacobiator(&self.basis(j), &self.basis(k), &self.basis(l))?;
                    if let Some(i) = first_nonzero(&jac) {
                        check.equal_constants("jacobi", i, &[j, k, l], &jac[i], &Rational::zero());
                        break 'outer;
                    }
                }
            }
        }
        Ok(check.finish())
    }

    /// The Akivis identity, in tensor form for every index tuple
    /// (alternating sum of `l3` against the cyclic double-bracket sum)
    /// and in vector form on all basis triples.
    pub fn check_akivis_identity(&self, model: &str) -> Result<CheckResult> {
        let l3 = self.l3.as_ref().ok_or(Error::MissingThirdOrder)?;
        let mut check = IdentityCheck::new("akivis", model, 0);
        let r = self.dimension;

        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    for l in 0..r {
                        // l^i_jkl + l^i_klj + l^i_ljk - l^i_jlk - l^i_lkj - l^i_kjl
                        let lhs = l3.get(i, j, k, l).clone()
                            + l3.get(i, k, l, j).clone()
                            + l3.get(i, l, j, k).clone()
                            - l3.get(i, j, l, k).clone()
                            - l3.get(i, l, k, j).clone()
                            - l3.get(i, k, j, l).clone();
                        // c^i_js c^s_kl + c^i_ks c^s_lj + c^i_ls c^s_jk
                        let mut rhs = Rational::zero();
                        for s in 0..r {
                            rhs += self.c.get(i, j, s).clone() * self.c.get(s, k, l).clone();
                            rhs += self.c.get(i, k, s).clone() * self.c.get(s, l, j).clone();
                            rhs += self.c.get(i, l, s).clone() * self.c.get(s, j, k).clone();
                        }
                        check.equal_constants("tensor_form", i, &[j, k, l], &lhs, &rhs);
                    }
                }
            }
        }

        // vector form J(x,y,z) = alternating sum of trilinear products
        for j in 0..r {
            for k in 0..r {
                for l in 0..r {
                    let (x, y, z) = (self.basis(j), self.basis(k), self.basis(l));
                    let jac = self.jacobiator(&x, &y, &z)?;
                    let sum = alternating_sum(self, &x, &y, &z)?;
                    for i in 0..r {
                        check.equal_constants("vector_form", i, &[j, k, l], &jac[i], &sum[i]);
                    }
                }
            }
        }

        Ok(check.finish())
    }

    /// Moufang specialization `J(x,y,z) = 6 (x,y,z)` on all basis triples.
    pub fn check_jacobiator_trilinear(&self, model: &str) -> Result<CheckResult> {
        if self.l3.is_none() {
            return Err(Error::MissingThirdOrder);
        }
        let mut check = IdentityCheck::new("jacobiator_trilinear", model, 0);
        let r = self.dimension;
        let six = rat(6, 1);
        for j in 0..r {
            for k in 0..r {
                for l in 0..r {
                    let (x, y, z) = (self.basis(j), self.basis(k), self.basis(l));
                    let jac = self.jacobiator(&x, &y, &z)?;
                    let tri = self.akivis_product(&x, &y, &z)?;
                    for i in 0..r {
                        let rhs = tri[i].clone() * six.clone();
                        check.equal_constants("six_trilinear", i, &[j, k, l], &jac[i], &rhs);
                    }
                }
            }
        }
        Ok(check.finish())
    }
}

fn alternating_sum(
    algebra: &AlgebraConstants,
    x: &TangentVector,
    y: &TangentVector,
    z: &TangentVector,
) -> Result<TangentVector> {
    let p1 = algebra.akivis_product(x, y, z)?;
    let p2 = algebra.akivis_product(y, z, x)?;
    let p3 = algebra.akivis_product(z, x, y)?;
    let n1 = algebra.akivis_product(x, z, y)?;
    let n2 = algebra.akivis_product(z, y, x)?;
    let n3 = algebra.akivis_product(y, x, z)?;
    Ok((0..x.len())
        .map(|i| {
            p1[i].clone() + p2[i].clone() + p3[i].clone()
                - n1[i].clone()
                - n2[i].clone()
                - n3[i].clone()
        })
        .collect())
}

fn add3(a: &TangentVector, b: &TangentVector, c: &TangentVector) -> TangentVector {
    (0..a.len())
        .map(|i| a[i].clone() + b[i].clone() + c[i].clone())
        .collect()
}

fn add4(a: &TangentVector, b: &TangentVector, c: &TangentVector, d: &TangentVector) -> TangentVector {
    (0..a.len())
        .map(|i| a[i].clone() + b[i].clone() + c[i].clone() + d[i].clone())
        .collect()
}

fn first_nonzero(v: &TangentVector) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::associator::{extract_structure_tensors, third_order_associators};
    use crate::model::LoopModel;

    fn constants_of(model: &LoopModel, with_l3: bool) -> AlgebraConstants {
        let order = if with_l3 { 4 } else { 3 };
        let f = model.multiplication_jet(order).unwrap();
        let st = extract_structure_tensors(&f).unwrap();
        let l3 = if with_l3 {
            Some(third_order_associators(&f).unwrap().direct.l)
        } else {
            None
        };
        AlgebraConstants::new(st.c, l3).unwrap()
    }

    #[test]
    fn bracket_is_antisymmetric_on_basis() {
        let alg = constants_of(&LoopModel::octonion_chart(), false);
        for j in 0..7 {
            let x = alg.basis(j);
            assert!(first_nonzero(&alg.bracket(&x, &x).unwrap()).is_none());
        }
    }

    #[test]
    fn bracket_antisymmetry_on_random_vectors() {
        let alg = constants_of(&LoopModel::octonion_chart(), false);
        // fixed pseudo-random rational vectors
        let vectors: Vec<TangentVector> = (0..6)
            .map(|s: i64| {
                (0..7)
                    .map(|i: i64| rat((i * 5 + s * 3) % 7 - 3, i % 3 + 1))
                    .collect()
            })
            .collect();
        for x in &vectors {
            for y in &vectors {
                let xy = alg.bracket(x, y).unwrap();
                let yx = alg.bracket(y, x).unwrap();
                for i in 0..7 {
                    assert!((xy[i].clone() + yx[i].clone()).is_zero());
                }
            }
        }
    }

    #[test]
    fn heisenberg_bracket_frozen() {
        let alg = constants_of(&LoopModel::heisenberg(), false);
        let b = alg.bracket(&alg.basis(0), &alg.basis(1)).unwrap();
        assert_eq!(b, alg.basis(2));
        let z = alg.bracket(&alg.basis(0), &alg.basis(2)).unwrap();
        assert!(first_nonzero(&z).is_none());
    }

    #[test]
    fn octonion_bracket_frozen() {
        let alg = constants_of(&LoopModel::octonion_chart(), false);
        // [e1, e2] = 2 e3 (zero-based indices 0,1 -> 2)
        let b = alg.bracket(&alg.basis(0), &alg.basis(1)).unwrap();
        let mut expected = vec![Rational::zero(); 7];
        expected[2] = rat(2, 1);
        assert_eq!(b, expected);
    }

    #[test]
    fn octonion_jacobiator_frozen() {
        // brute force over the signed table gives J(e1,e2,e4) = -12 e7
        let alg = constants_of(&LoopModel::octonion_chart(), false);
        let j = alg
            .jacobiator(&alg.basis(0), &alg.basis(1), &alg.basis(3))
            .unwrap();
        let mut expected = vec![Rational::zero(); 7];
        expected[6] = rat(-12, 1);
        assert_eq!(j, expected);
    }

    #[test]
    fn jacobiator_alternates() {
        let alg = constants_of(&LoopModel::octonion_chart(), false);
        let (x, y, z) = (alg.basis(0), alg.basis(1), alg.basis(3));
        let j1 = alg.jacobiator(&x, &y, &z).unwrap();
        let cyc = alg.jacobiator(&y, &z, &x).unwrap();
        assert_eq!(j1, cyc);
        let swapped = alg.jacobiator(&y, &x, &z).unwrap();
        let neg: TangentVector = j1.iter().map(|v| -v.clone()).collect();
        assert_eq!(swapped, neg);
        let degenerate = alg.jacobiator(&x, &x, &y).unwrap();
        assert!(first_nonzero(&degenerate).is_none());
    }

    #[test]
    fn akivis_product_behaviour() {
        let heis = constants_of(&LoopModel::heisenberg(), true);
        let p = heis
            .akivis_product(&heis.basis(0), &heis.basis(1), &heis.basis(2))
            .unwrap();
        assert!(first_nonzero(&p).is_none());

        let oct = constants_of(&LoopModel::octonion_chart(), true);
        let (x, y) = (oct.basis(0), oct.basis(1));
        let degenerate = oct.akivis_product(&x, &x, &y).unwrap();
        assert!(first_nonzero(&degenerate).is_none());

        let no_l3 = constants_of(&LoopModel::octonion_chart(), false);
        assert!(matches!(
            no_l3.akivis_product(&x, &x, &y),
            Err(Error::MissingThirdOrder)
        ));
    }

    #[test]
    fn malcev_holds_for_builtins() {
        for model in [LoopModel::heisenberg(), LoopModel::octonion_chart()] {
            let alg = constants_of(&model, false);
            let result = alg.check_malcev_identity(model.name()).unwrap();
            assert!(result.passed, "{}: {:?}", model.name(), result.first_failure);
        }
    }

    #[test]
    fn malcev_detects_perturbation() {
        let alg = constants_of(&LoopModel::octonion_chart(), false);
        let mut c = alg.c().clone();
        // c^3_12 = 3 breaks the Mal'tsev identity (zero-based 2,0,1)
        c.set(2, 0, 1, rat(3, 1));
        c.set(2, 1, 0, rat(-3, 1));
        let perturbed = AlgebraConstants::new(c, None).unwrap();
        let result = perturbed.check_malcev_identity("perturbed").unwrap();
        assert!(!result.passed);
        assert!(result.first_failure.is_some());
    }

    #[test]
    fn printed_sagle_variant_is_model_dependent() {
        let heis = constants_of(&LoopModel::heisenberg(), false);
        assert!(heis.printed_sagle_holds().unwrap());
        let oct = constants_of(&LoopModel::octonion_chart(), false);
        assert!(!oct.printed_sagle_holds().unwrap());
    }

    #[test]
    fn jacobi_checks() {
        let heis = constants_of(&LoopModel::heisenberg(), false);
        assert!(heis.check_jacobi_identity("heisenberg").unwrap().passed);
        let oct = constants_of(&LoopModel::octonion_chart(), false);
        assert!(!oct.check_jacobi_identity("octonion_chart").unwrap().passed);
    }

    #[test]
    fn akivis_and_trilinear_hold_for_octonion() {
        let alg = constants_of(&LoopModel::octonion_chart(), true);
        let akivis = alg.check_akivis_identity("octonion_chart").unwrap();
        assert!(akivis.passed, "{:?}", akivis.first_failure);
        let six = alg.check_jacobiator_trilinear("octonion_chart").unwrap();
        assert!(six.passed, "{:?}", six.first_failure);
    }
}
