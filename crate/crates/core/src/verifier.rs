//! Executable checks for the differential identities of a charted loop:
//! minimality conditions of orders one to three, generalized Lie and
//! Maurer-Cartan equations, commutation relations of the infinitesimal
//! translations, the dual-route associator oracles and the tangent
//! algebra identities, orchestrated into a deterministic suite.

use std::str::FromStr;

use rayon::prelude::*;

use crate::associator::{
    self, AuxiliaryFunctions, DualRoute, FirstOrderAssociators, JetCube, JetMatrix,
    SecondOrderAssociators, StructureTensors, TensorExport, ThirdOrderAssociators,
};
use crate::check::{CheckResult, IdentityCheck};
use crate::error::{Error, Result};
use crate::jet::{Jet, JetVector};
use crate::model::LoopModel;
use crate::tangent::AlgebraConstants;
use crate::tensor::Tensor4;
use crate::{Rational, RationalJet, RationalJetVector};

use num_traits::Zero;

/// Names of the runnable checks, in canonical output order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckName {
    LoopAxioms,
    MoufangIdentities,
    FirstOrderAssociators,
    SecondOrderAssociators,
    ThirdOrderAssociators,
    FirstMinimality,
    GeneralizedLie,
    SecondMinimality,
    SymmetricPart,
    MaurerCartan,
    CommutationRelations,
    ThirdMinimality,
    Malcev,
    Akivis,
    JacobiatorTrilinear,
    /// Lie-model degeneration check; meaningful only for associative
    /// models, hence not part of [`CheckName::all`].
    AssociativeDegeneration,
}

impl CheckName {
    pub fn id(self) -> &'static str {
        match self {
            Self::LoopAxioms => "loop_axioms",
            Self::MoufangIdentities => "moufang_identities",
            Self::FirstOrderAssociators => "first_order_associators",
            Self::SecondOrderAssociators => "second_order_associators",
            Self::ThirdOrderAssociators => "third_order_associators",
            Self::FirstMinimality => "first_minimality",
            Self::GeneralizedLie => "generalized_lie",
            Self::SecondMinimality => "second_minimality",
            Self::SymmetricPart => "symmetric_part",
            Self::MaurerCartan => "maurer_cartan",
            Self::CommutationRelations => "commutation_relations",
            Self::ThirdMinimality => "third_minimality",
            Self::Malcev => "malcev",
            Self::Akivis => "akivis",
            Self::JacobiatorTrilinear => "jacobiator_trilinear",
            Self::AssociativeDegeneration => "associative_degeneration",
        }
    }

    /// Smallest input order at which the check is defined.
    pub fn min_order(self) -> u32 {
        match self {
            Self::LoopAxioms => 1,
            Self::MoufangIdentities | Self::GeneralizedLie => 2,
            // malcev needs only the bracket constants, but those come out
            // of the structure-tensor extraction, whose contract is >= 3
            Self::FirstOrderAssociators
            | Self::FirstMinimality
            | Self::MaurerCartan
            | Self::CommutationRelations
            | Self::Malcev
            | Self::AssociativeDegeneration => 3,
            Self::SecondOrderAssociators
            | Self::ThirdOrderAssociators
            | Self::SecondMinimality
            | Self::SymmetricPart
            | Self::ThirdMinimality
            | Self::Akivis
            | Self::JacobiatorTrilinear => 4,
        }
    }

    /// The standard suite, in canonical order.
    pub fn all() -> Vec<CheckName> {
        vec![
            Self::LoopAxioms,
            Self::MoufangIdentities,
            Self::FirstOrderAssociators,
            Self::SecondOrderAssociators,
            Self::ThirdOrderAssociators,
            Self::FirstMinimality,
            Self::GeneralizedLie,
            Self::SecondMinimality,
            Self::SymmetricPart,
            Self::MaurerCartan,
            Self::CommutationRelations,
            Self::ThirdMinimality,
            Self::Malcev,
            Self::Akivis,
            Self::JacobiatorTrilinear,
        ]
    }

    /// The standard suite restricted to checks runnable at `order`.
    pub fn all_for_order(order: u32) -> Vec<CheckName> {
        Self::all()
            .into_iter()
            .filter(|c| c.min_order() <= order)
            .collect()
    }
}

impl FromStr for CheckName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::all()
            .into_iter()
            .chain([Self::AssociativeDegeneration])
            .find(|c| c.id() == s)
            .ok_or_else(|| Error::UnknownCheck(s.to_string()))
    }
}

/// Everything the checks consume, extracted once per suite run and shared
/// immutably across (possibly parallel) checks.
pub struct SymbolTower {
    pub model: LoopModel,
    pub order: u32,
    pub f: RationalJetVector,
    pub aux: Option<AuxiliaryFunctions>,
    pub tensors: Option<StructureTensors>,
    pub first: Option<DualRoute<FirstOrderAssociators>>,
    pub second: Option<DualRoute<SecondOrderAssociators>>,
    pub third: Option<DualRoute<ThirdOrderAssociators>>,
}

impl SymbolTower {
    /// Builds the tower pieces required by the selected checks.
    pub fn build(model: &LoopModel, order: u32, checks: &[CheckName]) -> Result<Self> {
        for check in checks {
            if order < check.min_order() {
                return Err(Error::CheckNeedsOrder {
                    check: check.id(),
                    needed: check.min_order(),
                    got: order,
                });
            }
        }
        let f = model.multiplication_jet(order)?;

        use CheckName::*;
        let has = |set: &[CheckName]| checks.iter().any(|c| set.contains(c));

        let needs_aux = has(&[
            GeneralizedLie,
            SymmetricPart,
            MaurerCartan,
            CommutationRelations,
            FirstOrderAssociators,
            SecondOrderAssociators,
            AssociativeDegeneration,
        ]);
        let needs_tensors = has(&[
            SymmetricPart,
            MaurerCartan,
            CommutationRelations,
            SecondOrderAssociators,
            ThirdOrderAssociators,
            Malcev,
            Akivis,
            JacobiatorTrilinear,
            AssociativeDegeneration,
        ]);
        let needs_first = has(&[
            FirstOrderAssociators,
            FirstMinimality,
            SecondOrderAssociators,
            ThirdOrderAssociators,
            SecondMinimality,
            ThirdMinimality,
            Akivis,
            JacobiatorTrilinear,
            AssociativeDegeneration,
        ]);
        let needs_second = has(&[
            SecondOrderAssociators,
            ThirdOrderAssociators,
            SecondMinimality,
            ThirdMinimality,
            Akivis,
            JacobiatorTrilinear,
            AssociativeDegeneration,
        ]);
        let needs_third = has(&[
            ThirdOrderAssociators,
            ThirdMinimality,
            Akivis,
            JacobiatorTrilinear,
            AssociativeDegeneration,
        ]);

        let aux = if needs_aux {
            Some(associator::compute_auxiliary(&f)?)
        } else {
            None
        };
        let tensors = if needs_tensors {
            Some(associator::extract_structure_tensors(&f)?)
        } else {
            None
        };

        let first = if needs_first {
            let direct = associator::first_order_direct(&f)?;
            let formula = if has(&[FirstOrderAssociators]) {
                let aux_ref = aux
                    .as_ref()
                    .expect("aux computed whenever the oracle runs");
                associator::first_order_formula(&f, aux_ref)?
            } else {
                direct.clone()
            };
            Some(DualRoute { direct, formula })
        } else {
            None
        };

        let second = if needs_second {
            let direct =
                associator::second_order_direct(&first.as_ref().unwrap().direct)?;
            let formula = if has(&[SecondOrderAssociators]) {
                associator::second_order_formula(
                    &f,
                    aux.as_ref().expect("aux computed for the oracle"),
                    tensors.as_ref().expect("tensors computed for the oracle"),
                )?
            } else {
                direct.clone()
            };
            Some(DualRoute { direct, formula })
        } else {
            None
        };

        let third = if needs_third {
            let direct = associator::third_order_direct(&second.as_ref().unwrap().direct)?;
            let formula = if has(&[ThirdOrderAssociators]) {
                associator::third_order_formula(tensors.as_ref().unwrap())?
            } else {
                direct.clone()
            };
            Some(DualRoute { direct, formula })
        } else {
            None
        };

        Ok(Self {
            model: model.clone(),
            order,
            f,
            aux,
            tensors,
            first,
            second,
            third,
        })
    }

    fn model_name(&self) -> &str {
        self.model.name()
    }

    fn dim(&self) -> usize {
        self.f.dimension()
    }

    fn aux(&self) -> &AuxiliaryFunctions {
        self.aux.as_ref().expect("aux required by this check")
    }

    fn tensors(&self) -> &StructureTensors {
        self.tensors.as_ref().expect("tensors required by this check")
    }

    fn first(&self) -> &DualRoute<FirstOrderAssociators> {
        self.first.as_ref().expect("first order required")
    }

    fn second(&self) -> &DualRoute<SecondOrderAssociators> {
        self.second.as_ref().expect("second order required")
    }

    fn third(&self) -> &DualRoute<ThirdOrderAssociators> {
        self.third.as_ref().expect("third order required")
    }

    /// Tangent-algebra constants exported from the tower.
    pub fn algebra_constants(&self) -> Result<AlgebraConstants> {
        let c = self.tensors().c.clone();
        let l3 = self.third.as_ref().map(|t| t.direct.l.clone());
        AlgebraConstants::new(c, l3)
    }

    /// JSON tensor export (bracket constants, third-order tensor if built).
    pub fn tensor_export(&self) -> TensorExport {
        TensorExport::new(
            &self.tensors().c,
            self.third.as_ref().map(|t| &t.direct.l),
        )
    }

    /// Runs one named check against the tower.
    pub fn run_check(&self, check: CheckName) -> Result<CheckResult> {
        let mut result = self.dispatch(check)?;
        // tangent checks are order-free on their own; within a suite run
        // they echo the order the constants were extracted at
        result.requested_order = self.order;
        Ok(result)
    }

    fn dispatch(&self, check: CheckName) -> Result<CheckResult> {
        match check {
            CheckName::LoopAxioms => self.model.check_loop_axioms(self.order),
            CheckName::MoufangIdentities => self.model.check_moufang_identities(self.order),
            CheckName::FirstOrderAssociators => self.check_first_order_oracle(),
            CheckName::SecondOrderAssociators => self.check_second_order_oracle(),
            CheckName::ThirdOrderAssociators => self.check_third_order_oracle(),
            CheckName::FirstMinimality => self.check_first_minimality(),
            CheckName::GeneralizedLie => self.check_generalized_lie(),
            CheckName::SecondMinimality => self.check_second_minimality(),
            CheckName::SymmetricPart => self.check_symmetric_part(),
            CheckName::MaurerCartan => self.check_maurer_cartan(),
            CheckName::CommutationRelations => self.check_commutation_relations(),
            CheckName::ThirdMinimality => self.check_third_minimality(),
            CheckName::Malcev => {
                let constants = AlgebraConstants::new(self.tensors().c.clone(), None)?;
                constants.check_malcev_identity(self.model_name())
            }
            CheckName::Akivis => self.algebra_constants()?.check_akivis_identity(self.model_name()),
            CheckName::JacobiatorTrilinear => self
                .algebra_constants()?
                .check_jacobiator_trilinear(self.model_name()),
            CheckName::AssociativeDegeneration => self.check_associative_degeneration(),
        }
    }

    /// Dual-route oracle at first order: formula output equals the direct
    /// jet-composition output, family by family.
    fn check_first_order_oracle(&self) -> Result<CheckResult> {
        let mut check =
            IdentityCheck::new("first_order_associators", self.model_name(), self.order);
        let routes = self.first();
        check.equal_jets("l", &flatten_matrix(&routes.direct.l), &flatten_matrix(&routes.formula.l));
        check.equal_jets("r", &flatten_matrix(&routes.direct.r), &flatten_matrix(&routes.formula.r));
        check.equal_jets("m", &flatten_matrix(&routes.direct.m), &flatten_matrix(&routes.formula.m));
        Ok(check.finish())
    }

    fn check_second_order_oracle(&self) -> Result<CheckResult> {
        let mut check =
            IdentityCheck::new("second_order_associators", self.model_name(), self.order);
        let routes = self.second();
        let pairs: [(&str, &JetCube, &JetCube); 6] = [
            ("l", &routes.direct.l, &routes.formula.l),
            ("l_hat", &routes.direct.l_hat, &routes.formula.l_hat),
            ("m", &routes.direct.m, &routes.formula.m),
            ("m_hat", &routes.direct.m_hat, &routes.formula.m_hat),
            ("r", &routes.direct.r, &routes.formula.r),
            ("r_hat", &routes.direct.r_hat, &routes.formula.r_hat),
        ];
        for (name, direct, formula) in pairs {
            check.equal_jets(name, &flatten_cube(direct), &flatten_cube(formula));
        }
        Ok(check.finish())
    }

    fn check_third_order_oracle(&self) -> Result<CheckResult> {
        let mut check =
            IdentityCheck::new("third_order_associators", self.model_name(), self.order);
        let routes = self.third();
        let pairs: [(&str, &Tensor4, &Tensor4); 6] = [
            ("l", &routes.direct.l, &routes.formula.l),
            ("l_hat", &routes.direct.l_hat, &routes.formula.l_hat),
            ("m", &routes.direct.m, &routes.formula.m),
            ("m_hat", &routes.direct.m_hat, &routes.formula.m_hat),
            ("r", &routes.direct.r, &routes.formula.r),
            ("r_hat", &routes.direct.r_hat, &routes.formula.r_hat),
        ];
        let r = self.dim();
        for (name, direct, formula) in pairs {
            for i in 0..r {
                for j in 0..r {
                    for k in 0..r {
                        for l in 0..r {
                            check.equal_constants(
                                name,
                                i,
                                &[j, k, l],
                                direct.get(i, j, k, l),
                                formula.get(i, j, k, l),
                            );
                        }
                    }
                }
            }
        }
        Ok(check.finish())
    }

    /// First-order minimality `l = r = -m` on the direct associator route.
    fn check_first_minimality(&self) -> Result<CheckResult> {
        let mut check = IdentityCheck::new("first_minimality", self.model_name(), self.order);
        let first = &self.first().direct;
        let l = flatten_matrix(&first.l);
        let r = flatten_matrix(&first.r);
        let m = flatten_matrix(&first.m);
        check.equal_jets("l_eq_r", &l, &r);
        check.equal_jets("l_eq_neg_m", &l, &m.neg());
        Ok(check.finish())
    }

    /// The three first-order differential equations in `u`, `v`, `w` plus
    /// their linear dependence (the sum of the left-hand sides vanishes
    /// for every model).
    fn check_generalized_lie(&self) -> Result<CheckResult> {
        let mut check = IdentityCheck::new("generalized_lie", self.model_name(), self.order);
        let frame = TwoBlockFrame::new(&self.f, self.aux())?;
        let r = self.dim();
        let order = self.f.order() - 1;
        let vars = 2 * r;

        let mut sums: Vec<Vec<RationalJet>> = Vec::with_capacity(3);
        let eqs = [
            ("translation_u", &frame.w_g, &frame.u_h, &frame.u_f),
            ("translation_v", &frame.v_g, &frame.w_h, &frame.v_f),
            ("translation_w", &frame.u_g, &frame.v_h, &frame.w_f),
        ];
        for (name, g_coeff, h_coeff, tail) in eqs {
            let mut family = Vec::with_capacity(r * r);
            for i in 0..r {
                for j in 0..r {
                    let mut acc = Jet::zero(vars, order);
                    for s in 0..r {
                        acc = acc.try_add(&g_coeff[s][j].try_mul(&frame.df_g[i][s])?)?;
                        acc = acc.try_add(&h_coeff[s][j].try_mul(&frame.df_h[i][s])?)?;
                    }
                    acc = acc.try_add(&tail[i][j])?;
                    family.push(acc);
                }
            }
            let family = JetVector::new(family)?;
            check.zero_jets(name, &family);
            sums.push(family.into_components());
        }

        // linear dependence: the three left-hand sides sum to zero
        // identically, Moufang or not
        let dependence = JetVector::new(
            (0..r * r)
                .map(|at| sums[0][at].try_add(&sums[1][at])?.try_add(&sums[2][at]))
                .collect::<Result<Vec<_>>>()?,
        )?;
        check.zero_jets("linear_dependence", &dependence);

        Ok(check.finish())
    }

    /// Second-order minimality `l = r = m` with `m` skew in its lower
    /// indices.
    fn check_second_minimality(&self) -> Result<CheckResult> {
        let mut check = IdentityCheck::new("second_minimality", self.model_name(), self.order);
        let second = &self.second().direct;
        let l = flatten_cube(&second.l);
        check.equal_jets("l_eq_r", &l, &flatten_cube(&second.r));
        check.equal_jets("l_eq_m", &l, &flatten_cube(&second.m));
        check.equal_jets("m_skew", &flatten_cube(&second.m), &flatten_cube(&transpose_cube(&second.m)).neg());
        Ok(check.finish())
    }

    /// The symmetric-part equations expressing the tilde functions through
    /// first derivatives, with the index-corrected contraction
    /// `(a^s_jk + a^s_kj) u^i_s` in the final term.
    fn check_symmetric_part(&self) -> Result<CheckResult> {
        let mut check = IdentityCheck::new("symmetric_part", self.model_name(), self.order);
        let aux = self.aux();
        let st = self.tensors();
        let r = self.dim();
        let order = self.f.order() - 2;
        let two = crate::rational::rat(2, 1);

        let du = matrix_partials(&aux.u)?;
        let dv = matrix_partials(&aux.v)?;

        for (name, mat, tilde, dmat) in [
            ("u_tilde", &aux.u, &aux.u2, &du),
            ("v_tilde", &aux.v, &aux.v2, &dv),
        ] {
            let mut lhs = Vec::with_capacity(r * r * r);
            let mut rhs = Vec::with_capacity(r * r * r);
            for i in 0..r {
                for j in 0..r {
                    for k in 0..r {
                        lhs.push(tilde[i][j][k].scale(&two));
                        let mut acc = Jet::zero(r, order);
                        for s in 0..r {
                            acc = acc.try_add(&mat[s][k].try_mul(&dmat[i][j][s])?)?;
                            acc = acc.try_add(&mat[s][j].try_mul(&dmat[i][k][s])?)?;
                            let sym = st.a.get(s, j, k).clone() + st.a.get(s, k, j).clone();
                            if !sym.is_zero() {
                                acc = acc.try_sub(&mat[i][s].scale(&sym))?;
                            }
                        }
                        rhs.push(acc);
                    }
                }
            }
            check.equal_jets(name, &JetVector::new(lhs)?, &JetVector::new(rhs)?);
        }
        Ok(check.finish())
    }

    /// Both generalized Maurer-Cartan equations and the `l-r` constraint,
    /// as jet identities in r variables.
    fn check_maurer_cartan(&self) -> Result<CheckResult> {
        let mut check = IdentityCheck::new("maurer_cartan", self.model_name(), self.order);
        let aux = self.aux();
        let st = self.tensors();
        let r = self.dim();
        let order = self.f.order() - 2;
        let two = crate::rational::rat(2, 1);

        let du = matrix_partials(&aux.u)?;
        let dv = matrix_partials(&aux.v)?;

        let mut mc_a_lhs = Vec::new();
        let mut mc_a_rhs = Vec::new();
        let mut mc_b_lhs = Vec::new();
        let mut mc_b_rhs = Vec::new();
        let mut lr_lhs = Vec::new();
        let mut lr_rhs = Vec::new();

        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    // (a): u^s_k du^i_j - u^s_j du^i_k
                    //      = c^s_jk u^i_s + 2 (v^s_j du^i_k - u^s_k dv^i_j)
                    let mut lhs = Jet::zero(r, order);
                    let mut cross = Jet::zero(r, order);
                    let mut bracket_term = Jet::zero(r, order);
                    for s in 0..r {
                        lhs = lhs.try_add(&aux.u[s][k].try_mul(&du[i][j][s])?)?;
                        lhs = lhs.try_sub(&aux.u[s][j].try_mul(&du[i][k][s])?)?;
                        cross = cross.try_add(&aux.v[s][j].try_mul(&du[i][k][s])?)?;
                        cross = cross.try_sub(&aux.u[s][k].try_mul(&dv[i][j][s])?)?;
                        let c = st.c.get(s, j, k);
                        if !c.is_zero() {
                            bracket_term = bracket_term.try_add(&aux.u[i][s].scale(c))?;
                        }
                    }
                    mc_a_lhs.push(lhs);
                    mc_a_rhs.push(bracket_term.try_add(&cross.scale(&two))?);

                    // (b): v^s_k dv^i_j - v^s_j dv^i_k
                    //      = c^s_kj v^i_s + 2 (u^s_j dv^i_k - v^s_k du^i_j)
                    let mut lhs = Jet::zero(r, order);
                    let mut cross = Jet::zero(r, order);
                    let mut bracket_term = Jet::zero(r, order);
                    for s in 0..r {
                        lhs = lhs.try_add(&aux.v[s][k].try_mul(&dv[i][j][s])?)?;
                        lhs = lhs.try_sub(&aux.v[s][j].try_mul(&dv[i][k][s])?)?;
                        cross = cross.try_add(&aux.u[s][j].try_mul(&dv[i][k][s])?)?;
                        cross = cross.try_sub(&aux.v[s][k].try_mul(&du[i][j][s])?)?;
                        let c = st.c.get(s, k, j);
                        if !c.is_zero() {
                            bracket_term = bracket_term.try_add(&aux.v[i][s].scale(c))?;
                        }
                    }
                    mc_b_lhs.push(lhs);
                    mc_b_rhs.push(bracket_term.try_add(&cross.scale(&two))?);

                    // (l-r): v^s_j du^i_k - u^s_k dv^i_j
                    //        = u^s_j dv^i_k - v^s_k du^i_j
                    let mut lhs = Jet::zero(r, order);
                    let mut rhs = Jet::zero(r, order);
                    for s in 0..r {
                        lhs = lhs.try_add(&aux.v[s][j].try_mul(&du[i][k][s])?)?;
                        lhs = lhs.try_sub(&aux.u[s][k].try_mul(&dv[i][j][s])?)?;
                        rhs = rhs.try_add(&aux.u[s][j].try_mul(&dv[i][k][s])?)?;
                        rhs = rhs.try_sub(&aux.v[s][k].try_mul(&du[i][j][s])?)?;
                    }
                    lr_lhs.push(lhs);
                    lr_rhs.push(rhs);
                }
            }
        }

        check.equal_jets("gen_mc_a", &JetVector::new(mc_a_lhs)?, &JetVector::new(mc_a_rhs)?);
        check.equal_jets("gen_mc_b", &JetVector::new(mc_b_lhs)?, &JetVector::new(mc_b_rhs)?);
        check.equal_jets("l_r_constraint", &JetVector::new(lr_lhs)?, &JetVector::new(lr_rhs)?);
        Ok(check.finish())
    }

    /// The commutation relations of the infinitesimal translations on all
    /// basis pairs, through the independent vector-field bracket path,
    /// plus one bilinearity spot check on a basis sum.
    fn check_commutation_relations(&self) -> Result<CheckResult> {
        let mut check =
            IdentityCheck::new("commutation_relations", self.model_name(), self.order);
        let aux = self.aux();
        let st = self.tensors();
        let r = self.dim();

        // L_x for x = e_j is column j of u; R_y likewise from v
        let left: Vec<RationalJetVector> = (0..r)
            .map(|j| field_column(&aux.u, j))
            .collect::<Result<_>>()?;
        let right: Vec<RationalJetVector> = (0..r)
            .map(|j| field_column(&aux.v, j))
            .collect::<Result<_>>()?;

        let mut ll_lhs = Vec::new();
        let mut ll_rhs = Vec::new();
        let mut rr_lhs = Vec::new();
        let mut rr_rhs = Vec::new();
        let mut lr_lhs = Vec::new();
        let mut lr_rhs = Vec::new();

        for j in 0..r {
            for k in 0..r {
                let lx_ry = vector_field_bracket(&left[j], &right[k])?;
                let rx_ly = vector_field_bracket(&right[j], &left[k])?;

                // (a) [L_j, L_k] = L_{[e_j,e_k]} - 2 [L_j, R_k]
                let lhs = vector_field_bracket(&left[j], &left[k])?;
                let mut rhs = contract_field(&aux.u, &st.c, j, k)?;
                rhs = rhs.try_sub(&scale_field(&lx_ry, 2))?;
                ll_lhs.extend(lhs.into_components());
                ll_rhs.extend(rhs.truncate_to(lhs_order(&aux.u)).into_components());

                // (b) [R_j, R_k] = R_{[e_k,e_j]} - 2 [R_j, L_k]
                let lhs = vector_field_bracket(&right[j], &right[k])?;
                let mut rhs = contract_field(&aux.v, &st.c, k, j)?;
                rhs = rhs.try_sub(&scale_field(&rx_ly, 2))?;
                rr_lhs.extend(lhs.into_components());
                rr_rhs.extend(rhs.truncate_to(lhs_order(&aux.v)).into_components());

                // (c) [L_j, R_k] = [R_j, L_k]
                lr_lhs.extend(lx_ry.into_components());
                lr_rhs.extend(rx_ly.into_components());
            }
        }

        check.equal_jets("left_left", &JetVector::new(ll_lhs)?, &JetVector::new(ll_rhs)?);
        check.equal_jets("right_right", &JetVector::new(rr_lhs)?, &JetVector::new(rr_rhs)?);
        check.equal_jets("left_right_symmetry", &JetVector::new(lr_lhs)?, &JetVector::new(lr_rhs)?);

        // bilinearity spot check: x = e_0 + e_1, y = e_2
        if r >= 3 {
            let x_field = left[0].try_add(&left[1])?;
            let y_field = left[2].clone();
            let lhs = vector_field_bracket(&x_field, &y_field)?;
            let mut rhs = contract_field(&aux.u, &st.c, 0, 2)?
                .try_add(&contract_field(&aux.u, &st.c, 1, 2)?)?;
            let x_r = right[2].clone();
            let cross = vector_field_bracket(&x_field, &x_r)?;
            rhs = rhs.try_sub(&scale_field(&cross, 2))?;
            check.equal_jets("bilinearity", &lhs, &rhs.truncate_to(lhs.order()));
        }

        Ok(check.finish())
    }

    /// Third-order minimality: the displayed chain of equalities among the
    /// six constant tensors and total antisymmetry of `l` in its lower
    /// indices.
    fn check_third_minimality(&self) -> Result<CheckResult> {
        let mut check = IdentityCheck::new("third_minimality", self.model_name(), self.order);
        let third = &self.third().direct;
        let r = self.dim();
        let l = &third.l;

        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    for q in 0..r {
                        let base = l.get(i, j, k, q).clone();
                        let neg = -base.clone();
                        check.equal_constants("cyclic", i, &[j, k, q], &base, l.get(i, k, q, j));
                        check.equal_constants(
                            "transposition",
                            i,
                            &[j, k, q],
                            &neg,
                            l.get(i, q, k, j),
                        );
                        check.equal_constants("r_eq", i, &[j, k, q], &base, third.r.get(i, j, k, q));
                        check.equal_constants("m_eq", i, &[j, k, q], &base, third.m.get(i, j, k, q));
                        check.equal_constants(
                            "l_hat_neg",
                            i,
                            &[j, k, q],
                            &neg,
                            third.l_hat.get(i, j, k, q),
                        );
                        check.equal_constants(
                            "r_hat_neg",
                            i,
                            &[j, k, q],
                            &neg,
                            third.r_hat.get(i, j, k, q),
                        );
                        check.equal_constants(
                            "m_hat_neg",
                            i,
                            &[j, k, q],
                            &neg,
                            third.m_hat.get(i, j, k, q),
                        );
                        // total antisymmetry over all six permutations
                        check.equal_constants("antisymmetry", i, &[j, k, q], &base, l.get(i, k, q, j));
                        check.equal_constants("antisymmetry", i, &[j, k, q], &base, l.get(i, q, j, k));
                        check.equal_constants("antisymmetry", i, &[j, k, q], &neg, l.get(i, k, j, q));
                        check.equal_constants("antisymmetry", i, &[j, k, q], &neg, l.get(i, j, q, k));
                        check.equal_constants("antisymmetry", i, &[j, k, q], &neg, l.get(i, q, k, j));
                    }
                }
            }
        }
        Ok(check.finish())
    }

    /// Lie-model degeneration: every associator family vanishes, the
    /// cross terms `[L_x, R_y]` vanish, and the classical Maurer-Cartan
    /// equation holds. Only meaningful for associative models.
    fn check_associative_degeneration(&self) -> Result<CheckResult> {
        let mut check =
            IdentityCheck::new("associative_degeneration", self.model_name(), self.order);
        let aux = self.aux();
        let st = self.tensors();
        let r = self.dim();

        let first = &self.first().direct;
        check.zero_jets("first_order_vanish", &flatten_matrix(&first.l));
        check.zero_jets("first_order_vanish_r", &flatten_matrix(&first.r));
        check.zero_jets("first_order_vanish_m", &flatten_matrix(&first.m));
        if let Some(second) = &self.second {
            check.zero_jets("second_order_vanish", &flatten_cube(&second.direct.l));
            check.zero_jets("second_order_vanish_m", &flatten_cube(&second.direct.m));
            check.zero_jets("second_order_vanish_r", &flatten_cube(&second.direct.r));
        }
        if let Some(third) = &self.third {
            for i in 0..r {
                for j in 0..r {
                    for k in 0..r {
                        for q in 0..r {
                            check.equal_constants(
                                "third_order_vanish",
                                i,
                                &[j, k, q],
                                third.direct.l.get(i, j, k, q),
                                &Rational::zero(),
                            );
                        }
                    }
                }
            }
        }

        let left: Vec<RationalJetVector> = (0..r)
            .map(|j| field_column(&aux.u, j))
            .collect::<Result<_>>()?;
        let right: Vec<RationalJetVector> = (0..r)
            .map(|j| field_column(&aux.v, j))
            .collect::<Result<_>>()?;
        let mut cross = Vec::new();
        let mut classical_lhs = Vec::new();
        let mut classical_rhs = Vec::new();
        let du = matrix_partials(&aux.u)?;
        let order = self.f.order() - 2;
        for j in 0..r {
            for k in 0..r {
                cross.extend(vector_field_bracket(&left[j], &right[k])?.into_components());
                // classical: u^s_k du^i_j - u^s_j du^i_k = c^s_jk u^i_s
                for i in 0..r {
                    let mut lhs = Jet::zero(r, order);
                    let mut rhs = Jet::zero(r, order);
                    for s in 0..r {
                        lhs = lhs.try_add(&aux.u[s][k].try_mul(&du[i][j][s])?)?;
                        lhs = lhs.try_sub(&aux.u[s][j].try_mul(&du[i][k][s])?)?;
                        let c = st.c.get(s, j, k);
                        if !c.is_zero() {
                            rhs = rhs.try_add(&aux.u[i][s].scale(c))?;
                        }
                    }
                    classical_lhs.push(lhs);
                    classical_rhs.push(rhs);
                }
            }
        }
        check.zero_jets("cross_terms_vanish", &JetVector::new(cross)?);
        check.equal_jets(
            "classical_maurer_cartan",
            &JetVector::new(classical_lhs)?,
            &JetVector::new(classical_rhs)?,
        );

        Ok(check.finish())
    }
}

fn lhs_order(m: &JetMatrix) -> u32 {
    m[0][0].order().saturating_sub(1)
}

/// Flattens an `[i][j]` matrix of same-space jets into one jet vector
/// (row-major; the witness component is `i * r + j`).
fn flatten_matrix(m: &JetMatrix) -> RationalJetVector {
    JetVector::new(m.iter().flat_map(|row| row.iter().cloned()).collect())
        .expect("family entries share one space")
}

/// Flattens an `[i][j][k]` cube (witness component `(i * r + j) * r + k`).
fn flatten_cube(c: &JetCube) -> RationalJetVector {
    JetVector::new(
        c.iter()
            .flat_map(|plane| plane.iter().flat_map(|row| row.iter().cloned()))
            .collect(),
    )
    .expect("family entries share one space")
}

fn transpose_cube(c: &JetCube) -> JetCube {
    let r = c.len();
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| (0..r).map(|k| c[i][k][j].clone()).collect())
                .collect()
        })
        .collect()
}

/// Partial-derivative table `d m[i][j] / d g^s`, indexed `[i][j][s]`.
fn matrix_partials(m: &JetMatrix) -> Result<JetCube> {
    let r = m.len();
    m.iter()
        .map(|row| {
            row.iter()
                .map(|jet| (0..r).map(|s| jet.try_partial(s)).collect())
                .collect::<Result<Vec<_>>>()
        })
        .collect()
}

/// Column `j` of a coefficient matrix as a vector field on the chart.
fn field_column(m: &JetMatrix, j: usize) -> Result<RationalJetVector> {
    JetVector::new(m.iter().map(|row| row[j].clone()).collect())
}

/// Commutator of two vector fields on the chart, in the composition
/// convention under which the commutation relations rewrite the
/// generalized Maurer-Cartan equations: on components,
/// `[A, B]^i = B^s dA^i/dg^s - A^s dB^i/dg^s`.
///
/// With the opposite component order the left-translation fields of a
/// plain group would satisfy `[L_x, L_y] = -L_{[x,y]}`; this convention
/// recovers the classical `[L_x, L_y] = L_{[x,y]}` there.
fn vector_field_bracket(
    a: &RationalJetVector,
    b: &RationalJetVector,
) -> Result<RationalJetVector> {
    let r = a.dimension();
    let order = a.order().min(b.order()).saturating_sub(1);
    let mut components = Vec::with_capacity(r);
    for i in 0..r {
        let mut acc = Jet::zero(a.num_vars(), order);
        for s in 0..r {
            acc = acc.try_add(&b.component(s).try_mul(&a.component(i).try_partial(s)?)?)?;
            acc = acc.try_sub(&a.component(s).try_mul(&b.component(i).try_partial(s)?)?)?;
        }
        components.push(acc);
    }
    JetVector::new(components)
}

/// The translation field of the bracket `[e_j, e_k]`: components
/// `sum_s c^s_jk m[i][s]`.
fn contract_field(
    m: &JetMatrix,
    c: &crate::tensor::Tensor3,
    j: usize,
    k: usize,
) -> Result<RationalJetVector> {
    let r = m.len();
    let order = m[0][0].order();
    let mut components = Vec::with_capacity(r);
    for i in 0..r {
        let mut acc = Jet::zero(r, order);
        for s in 0..r {
            let coeff = c.get(s, j, k);
            if !coeff.is_zero() {
                acc = acc.try_add(&m[i][s].scale(coeff))?;
            }
        }
        components.push(acc);
    }
    JetVector::new(components)
}

fn scale_field(v: &RationalJetVector, factor: i64) -> RationalJetVector {
    let factor = crate::rational::rat(factor, 1);
    JetVector::new(
        v.components()
            .iter()
            .map(|c| c.scale(&factor))
            .collect(),
    )
    .expect("scaling keeps the space")
}

/// Shared 2r-variable plumbing for the generalized Lie equations: the
/// embedded auxiliary matrices, the partial-derivative tables of `F` and
/// the compositions `u(gh)`, `v(gh)`, `w(gh)`.
struct TwoBlockFrame {
    df_g: Vec<Vec<RationalJet>>,
    df_h: Vec<Vec<RationalJet>>,
    u_g: JetMatrix,
    u_h: JetMatrix,
    v_g: JetMatrix,
    v_h: JetMatrix,
    w_g: JetMatrix,
    w_h: JetMatrix,
    u_f: JetMatrix,
    v_f: JetMatrix,
    w_f: JetMatrix,
}

impl TwoBlockFrame {
    fn new(f: &RationalJetVector, aux: &AuxiliaryFunctions) -> Result<Self> {
        let r = f.dimension();
        let vars = 2 * r;
        let g_map: Vec<usize> = (0..r).collect();
        let h_map: Vec<usize> = (r..2 * r).collect();

        let embed = |m: &JetMatrix, map: &[usize]| -> Result<JetMatrix> {
            m.iter()
                .map(|row| row.iter().map(|jet| jet.embed(vars, map)).collect())
                .collect()
        };
        let compose = |m: &JetMatrix| -> Result<JetMatrix> {
            let flat: Vec<RationalJet> = m.iter().flat_map(|row| row.iter().cloned()).collect();
            let composed = JetVector::new(flat)?.compose(f.components())?;
            let mut iter = composed.into_components().into_iter();
            Ok((0..r)
                .map(|_| (0..r).map(|_| iter.next().unwrap()).collect())
                .collect())
        };

        let mut df_g = Vec::with_capacity(r);
        let mut df_h = Vec::with_capacity(r);
        for i in 0..r {
            let fi = f.component(i);
            df_g.push((0..r).map(|s| fi.try_partial(s)).collect::<Result<Vec<_>>>()?);
            df_h.push(
                (0..r)
                    .map(|s| fi.try_partial(r + s))
                    .collect::<Result<Vec<_>>>()?,
            );
        }

        Ok(Self {
            df_g,
            df_h,
            u_g: embed(&aux.u, &g_map)?,
            u_h: embed(&aux.u, &h_map)?,
            v_g: embed(&aux.v, &g_map)?,
            v_h: embed(&aux.v, &h_map)?,
            w_g: embed(&aux.w, &g_map)?,
            w_h: embed(&aux.w, &h_map)?,
            u_f: compose(&aux.u)?,
            v_f: compose(&aux.v)?,
            w_f: compose(&aux.w)?,
        })
    }
}

/// Runs the selected checks against one model at one order, sharing the
/// extracted tower. `jobs > 1` runs the checks on a local thread pool;
/// results come back in canonical order either way.
pub fn run_suite(
    model: &LoopModel,
    order: u32,
    checks: &[CheckName],
    jobs: Option<usize>,
) -> Result<Vec<CheckResult>> {
    let mut selected: Vec<CheckName> = checks.to_vec();
    selected.sort();
    selected.dedup();

    let tower = SymbolTower::build(model, order, &selected)?;

    let results: Result<Vec<CheckResult>> = match jobs {
        Some(n) if n > 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidModel(format!("thread pool: {e}")))?;
            pool.install(|| {
                selected
                    .par_iter()
                    .map(|&check| tower.run_check(check))
                    .collect()
            })
        }
        _ => selected.iter().map(|&check| tower.run_check(check)).collect(),
    };
    results
}
