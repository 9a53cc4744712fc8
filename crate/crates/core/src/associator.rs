//! The symbol tower of a multiplication jet: auxiliary functions,
//! structure tensors and the associators of orders one to three.
//!
//! Everything here is computed twice, by independent routes:
//!
//! - **direct**: compose the associator jet
//!   `a(g,h,k) = (g.hk) - (gh.k)` and differentiate it at the origin;
//! - **formula**: evaluate the closed expressions in the auxiliary
//!   functions `u`, `v` and the structure constants.
//!
//! The two routes are each other's oracle: for a correct implementation
//! they agree coefficient-for-coefficient at the common reliable order.
//!
//! Conventions. With `a(x1,x2,x3)` the associator in three argument
//! blocks, the first-order families are the linear coefficients in one
//! argument, as functions of the remaining pair renamed to `(g,h)`:
//! `l` differentiates in the first slot, `m` in the second, `r` in the
//! third. Expanding `l`, `r` in their first argument (and `m` in its
//! second) gives the unhatted second-order families; the opposite slots
//! give the hatted ones. Third-order tensors are the linear coefficients
//! of the second-order jets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::{ExponentVector, Jet, JetVector};
use crate::rational::{format_rational, parse_rational};
use crate::tensor::{Tensor3, Tensor4};
use crate::{Rational, RationalJet, RationalJetVector};

use num_traits::Zero;

/// r x r matrix of jets, indexed `[i][j]`.
pub type JetMatrix = Vec<Vec<RationalJet>>;
/// r x r x r array of jets, indexed `[i][j][k]`.
pub type JetCube = Vec<Vec<Vec<RationalJet>>>;

/// A quantity computed by two independent routes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualRoute<T> {
    pub direct: T,
    pub formula: T,
}

/// First-order coefficients of the multiplication expansion:
/// `u^i_j(h)`, `v^i_j(g)` (jets in r variables, one order below the
/// input), their second-order companions `u2 = ~u`, `v2 = ~v` (two orders
/// below), and `w = -u - v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxiliaryFunctions {
    pub u: JetMatrix,
    pub v: JetMatrix,
    pub w: JetMatrix,
    pub u2: JetCube,
    pub v2: JetCube,
}

/// Constant tensors of the order-3 Taylor expansion
/// `(gh)^i = g^i + h^i + a^i_jk g^j h^k + b^i_jkl g^j g^k h^l
///  + d^i_jkl g^j h^k h^l + ...`, with `b` stored symmetrized in (j,k),
/// `d` in (k,l), and `c^i_jk = a^i_jk - a^i_kj`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureTensors {
    pub a: Tensor3,
    pub b: Tensor4,
    pub d: Tensor4,
    pub c: Tensor3,
}

/// First-order associators `l^i_j(g,h)`, `r^i_j(g,h)`, `m^i_j(g,h)`:
/// jets in 2r variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstOrderAssociators {
    pub l: JetMatrix,
    pub r: JetMatrix,
    pub m: JetMatrix,
}

/// Second-order associators: six families of jets in r variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecondOrderAssociators {
    pub l: JetCube,
    pub l_hat: JetCube,
    pub m: JetCube,
    pub m_hat: JetCube,
    pub r: JetCube,
    pub r_hat: JetCube,
}

/// Third-order associators: six constant tensors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThirdOrderAssociators {
    pub l: Tensor4,
    pub l_hat: Tensor4,
    pub m: Tensor4,
    pub m_hat: Tensor4,
    pub r: Tensor4,
    pub r_hat: Tensor4,
}

fn require_order(f: &RationalJetVector, what: &'static str, needed: u32) -> Result<()> {
    if f.order() < needed {
        return Err(Error::InsufficientOrder {
            what,
            needed,
            got: f.order(),
        });
    }
    Ok(())
}

fn block_slots(r: usize, block: usize) -> Vec<usize> {
    (block * r..block * r + r).collect()
}

/// Reads the structure tensors off the mixed coefficients of `F`.
pub fn extract_structure_tensors(f: &RationalJetVector) -> Result<StructureTensors> {
    require_order(f, "structure tensors", 3)?;
    let r = f.dimension();
    let vars = 2 * r;

    let mut a = Tensor3::zeros(r);
    let mut b = Tensor4::zeros(r);
    let mut d = Tensor4::zeros(r);

    let coeff = |i: usize, e: Vec<u32>| -> Rational {
        f.component(i)
            .coefficient(&ExponentVector::new(e))
            .expect("degree <= 3 <= order")
    };

    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                let mut e = vec![0u32; vars];
                e[j] += 1;
                e[r + k] += 1;
                a.set(i, j, k, coeff(i, e));
            }
        }
    }

    // only the (j,k)-symmetric part of b (and the (k,l)-symmetric part of
    // d) is determined by the expansion; store those representatives
    let half = crate::rational::rat(1, 2);
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                for l in 0..r {
                    let mut e = vec![0u32; vars];
                    e[j] += 1;
                    e[k] += 1;
                    e[r + l] += 1;
                    let raw = coeff(i, e);
                    let value = if j == k { raw } else { raw * half.clone() };
                    b.set(i, j, k, l, value);

                    let mut e = vec![0u32; vars];
                    e[j] += 1;
                    e[r + k] += 1;
                    e[r + l] += 1;
                    let raw = coeff(i, e);
                    let value = if k == l { raw } else { raw * half.clone() };
                    d.set(i, j, k, l, value);
                }
            }
        }
    }

    let mut c = Tensor3::zeros(r);
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                c.set(i, j, k, a.get(i, j, k).clone() - a.get(i, k, j).clone());
            }
        }
    }

    Ok(StructureTensors { a, b, d, c })
}

/// Differentiates `F` at each origin block: `u^i_j = dF^i/dg^j |_{g=0}`
/// as a jet in `h` (re-homed to r variables), `v` symmetrically, the
/// tilde functions from the second derivatives, and `w = -u - v`.
pub fn compute_auxiliary(f: &RationalJetVector) -> Result<AuxiliaryFunctions> {
    require_order(f, "auxiliary functions", 2)?;
    let r = f.dimension();
    let h_slots = block_slots(r, 1);
    let g_slots = block_slots(r, 0);

    let mut u = Vec::with_capacity(r);
    let mut v = Vec::with_capacity(r);
    let mut u2 = Vec::with_capacity(r);
    let mut v2 = Vec::with_capacity(r);

    for i in 0..r {
        let fi = f.component(i);
        let mut u_row = Vec::with_capacity(r);
        let mut v_row = Vec::with_capacity(r);
        let mut u2_row = Vec::with_capacity(r);
        let mut v2_row = Vec::with_capacity(r);
        for j in 0..r {
            let dg = fi.try_partial(j)?;
            u_row.push(dg.project(&h_slots)?);
            let dh = fi.try_partial(r + j)?;
            v_row.push(dh.project(&g_slots)?);

            let mut u2_cell = Vec::with_capacity(r);
            let mut v2_cell = Vec::with_capacity(r);
            for k in 0..r {
                u2_cell.push(dg.try_partial(k)?.project(&h_slots)?);
                v2_cell.push(dh.try_partial(r + k)?.project(&g_slots)?);
            }
            u2_row.push(u2_cell);
            v2_row.push(v2_cell);
        }
        u.push(u_row);
        v.push(v_row);
        u2.push(u2_row);
        v2.push(v2_row);
    }

    let w = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| u[i][j].neg().try_sub(&v[i][j]))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(AuxiliaryFunctions { u, v, w, u2, v2 })
}

/// The associator jet `a^i(g,h,k) = (g.hk)^i - (gh.k)^i` in 3r variables
/// (blocks g, h, k), at the reliable order of `F`.
pub fn associator_jet(f: &RationalJetVector) -> Result<RationalJetVector> {
    let r = f.dimension();
    let order = f.order();
    let vars = 3 * r;

    // F re-homed to the (h,k) and (g,h) blocks of the triple space
    let hk_map: Vec<usize> = (r..3 * r).collect();
    let gh_map: Vec<usize> = (0..2 * r).collect();
    let f_hk = f.embed(vars, &hk_map)?;
    let f_gh = f.embed(vars, &gh_map)?;

    let g = JetVector::identity_block(vars, 0, r, order);
    let k = JetVector::identity_block(vars, 2 * r, r, order);

    let left = f.apply(&[&g, &f_hk])?;
    let right = f.apply(&[&f_gh, &k])?;
    left.try_sub(&right)
}

/// Both routes to the first-order associators.
pub fn first_order_associators(
    f: &RationalJetVector,
) -> Result<DualRoute<FirstOrderAssociators>> {
    require_order(f, "first-order associators", 3)?;
    let direct = first_order_direct(f)?;
    let formula = first_order_formula(f, &compute_auxiliary(f)?)?;
    Ok(DualRoute { direct, formula })
}

/// First-order associators by differentiating the associator jet.
pub fn first_order_direct(f: &RationalJetVector) -> Result<FirstOrderAssociators> {
    let r = f.dimension();
    let assoc = associator_jet(f)?;

    // remaining blocks after killing one argument, renamed to (g,h)
    let blocks_23: Vec<usize> = (r..3 * r).collect();
    let blocks_13: Vec<usize> = (0..r).chain(2 * r..3 * r).collect();
    let blocks_12: Vec<usize> = (0..2 * r).collect();

    let mut l = Vec::with_capacity(r);
    let mut m = Vec::with_capacity(r);
    let mut rr = Vec::with_capacity(r);
    for i in 0..r {
        let ai = assoc.component(i);
        let mut l_row = Vec::with_capacity(r);
        let mut m_row = Vec::with_capacity(r);
        let mut r_row = Vec::with_capacity(r);
        for j in 0..r {
            l_row.push(ai.try_partial(j)?.project(&blocks_23)?);
            m_row.push(ai.try_partial(r + j)?.project(&blocks_13)?);
            r_row.push(ai.try_partial(2 * r + j)?.project(&blocks_12)?);
        }
        l.push(l_row);
        m.push(m_row);
        rr.push(r_row);
    }

    Ok(FirstOrderAssociators { l, r: rr, m })
}

/// First-order associators from the closed expressions in `u`, `v`.
pub fn first_order_formula(
    f: &RationalJetVector,
    aux: &AuxiliaryFunctions,
) -> Result<FirstOrderAssociators> {
    let r = f.dimension();
    let vars = 2 * r;
    let g_map: Vec<usize> = (0..r).collect();
    let h_map: Vec<usize> = (r..2 * r).collect();

    // partial derivative tables of F in both blocks
    let mut df_g = Vec::with_capacity(r);
    let mut df_h = Vec::with_capacity(r);
    for i in 0..r {
        let fi = f.component(i);
        df_g.push(
            (0..r)
                .map(|s| fi.try_partial(s))
                .collect::<Result<Vec<_>>>()?,
        );
        df_h.push(
            (0..r)
                .map(|s| fi.try_partial(r + s))
                .collect::<Result<Vec<_>>>()?,
        );
    }

    // u, v with argument g (block 0) or h (block 1)
    let embed_matrix = |m: &JetMatrix, map: &[usize]| -> Result<JetMatrix> {
        m.iter()
            .map(|row| row.iter().map(|jet| jet.embed(vars, map)).collect())
            .collect()
    };
    let u_g = embed_matrix(&aux.u, &g_map)?;
    let u_h = embed_matrix(&aux.u, &h_map)?;
    let v_g = embed_matrix(&aux.v, &g_map)?;
    let v_h = embed_matrix(&aux.v, &h_map)?;

    // u(gh), v(gh): one shared composition over all r^2 entries
    let compose_matrix = |m: &JetMatrix| -> Result<JetMatrix> {
        let flat: Vec<RationalJet> = m.iter().flat_map(|row| row.iter().cloned()).collect();
        let composed = JetVector::new(flat)?.compose(f.components())?;
        let mut out = Vec::with_capacity(r);
        let mut iter = composed.into_components().into_iter();
        for _ in 0..r {
            out.push((0..r).map(|_| iter.next().unwrap()).collect());
        }
        Ok(out)
    };
    let u_of_f = compose_matrix(&aux.u)?;
    let v_of_f = compose_matrix(&aux.v)?;

    let order = f.order() - 1;
    let sum_contract = |coeffs: &JetMatrix, table: &[Vec<RationalJet>], i: usize, j: usize| {
        // sum_s coeffs[s][j] * table[i][s]
        let mut acc = Jet::zero(vars, order);
        for s in 0..r {
            let term = coeffs[s][j].try_mul(&table[i][s])?;
            acc = acc.try_add(&term)?;
        }
        Ok::<RationalJet, Error>(acc)
    };

    let mut l = Vec::with_capacity(r);
    let mut m = Vec::with_capacity(r);
    let mut rr = Vec::with_capacity(r);
    for i in 0..r {
        let mut l_row = Vec::with_capacity(r);
        let mut m_row = Vec::with_capacity(r);
        let mut r_row = Vec::with_capacity(r);
        for j in 0..r {
            // l^i_j = -u^s_j(g) dF^i/dg^s + u^i_j(gh)
            let term = sum_contract(&u_g, &df_g, i, j)?;
            l_row.push(u_of_f[i][j].try_sub(&term)?);
            // r^i_j = -v^i_j(gh) + v^s_j(h) dF^i/dh^s
            let term = sum_contract(&v_h, &df_h, i, j)?;
            r_row.push(term.try_sub(&v_of_f[i][j])?);
            // m^i_j = -v^s_j(g) dF^i/dg^s + u^s_j(h) dF^i/dh^s
            let neg = sum_contract(&v_g, &df_g, i, j)?;
            let pos = sum_contract(&u_h, &df_h, i, j)?;
            m_row.push(pos.try_sub(&neg)?);
        }
        l.push(l_row);
        m.push(m_row);
        rr.push(r_row);
    }

    Ok(FirstOrderAssociators { l, r: rr, m })
}

/// Both routes to the second-order associators.
pub fn second_order_associators(
    f: &RationalJetVector,
) -> Result<DualRoute<SecondOrderAssociators>> {
    require_order(f, "second-order associators", 4)?;
    let aux = compute_auxiliary(f)?;
    let tensors = extract_structure_tensors(f)?;
    let first = first_order_direct(f)?;
    let direct = second_order_direct(&first)?;
    let formula = second_order_formula(f, &aux, &tensors)?;
    Ok(DualRoute { direct, formula })
}

/// Second-order associators by expanding the first-order (direct) jets.
pub fn second_order_direct(first: &FirstOrderAssociators) -> Result<SecondOrderAssociators> {
    let r = first.l.len();
    let g_slots = block_slots(r, 0);
    let h_slots = block_slots(r, 1);

    // expansion of a 2r-variable family in its g block (coefficients are
    // jets in the h block) or vice versa
    let expand = |family: &JetMatrix, in_g: bool| -> Result<JetCube> {
        family
            .iter()
            .map(|row| {
                row.iter()
                    .map(|jet| {
                        (0..r)
                            .map(|k| {
                                if in_g {
                                    jet.try_partial(k)?.project(&h_slots)
                                } else {
                                    jet.try_partial(r + k)?.project(&g_slots)
                                }
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect()
    };

    Ok(SecondOrderAssociators {
        l: expand(&first.l, true)?,
        l_hat: expand(&first.l, false)?,
        r: expand(&first.r, true)?,
        r_hat: expand(&first.r, false)?,
        m_hat: expand(&first.m, true)?,
        m: expand(&first.m, false)?,
    })
}

/// Second-order associators from the closed expressions in `u`, `v`,
/// their tilde companions and the structure constants.
pub fn second_order_formula(
    f: &RationalJetVector,
    aux: &AuxiliaryFunctions,
    st: &StructureTensors,
) -> Result<SecondOrderAssociators> {
    let r = f.dimension();
    let order = f.order() - 2;

    let du: Vec<Vec<Vec<RationalJet>>> = aux
        .u
        .iter()
        .map(|row| {
            row.iter()
                .map(|jet| (0..r).map(|s| jet.try_partial(s)).collect())
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let dv: Vec<Vec<Vec<RationalJet>>> = aux
        .v
        .iter()
        .map(|row| {
            row.iter()
                .map(|jet| (0..r).map(|s| jet.try_partial(s)).collect())
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut l = vec![vec![Vec::with_capacity(r); r]; r];
    let mut m = vec![vec![Vec::with_capacity(r); r]; r];
    let mut rr = vec![vec![Vec::with_capacity(r); r]; r];

    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                // l^i_jk = -u2^i_kj - a^s_jk u^i_s + u^s_k du^i_j/dg^s
                let mut acc = aux.u2[i][k][j].neg();
                for s in 0..r {
                    let coeff = st.a.get(s, j, k).clone();
                    if !coeff.is_zero() {
                        acc = acc.try_sub(&aux.u[i][s].scale(&coeff))?;
                    }
                    acc = acc.try_add(&aux.u[s][k].try_mul(&du[i][j][s])?)?;
                }
                l[i][j].push(acc.truncate_to(order));

                // m^i_jk = v2^i_jk + a^s_jk v^i_s - v^s_j dv^i_k/dg^s
                let mut acc = aux.v2[i][j][k].clone();
                for s in 0..r {
                    let coeff = st.a.get(s, j, k).clone();
                    if !coeff.is_zero() {
                        acc = acc.try_add(&aux.v[i][s].scale(&coeff))?;
                    }
                    acc = acc.try_sub(&aux.v[s][j].try_mul(&dv[i][k][s])?)?;
                }
                m[i][j].push(acc.truncate_to(order));

                // r^i_jk = v^s_j du^i_k/dg^s - u^s_k dv^i_j/dg^s
                let mut acc = Jet::zero(r, order);
                for s in 0..r {
                    acc = acc.try_add(&aux.v[s][j].try_mul(&du[i][k][s])?)?;
                    acc = acc.try_sub(&aux.u[s][k].try_mul(&dv[i][j][s])?)?;
                }
                rr[i][j].push(acc);
            }
        }
    }

    // hatted families via the index identities
    let transpose = |cube: &JetCube| -> JetCube {
        (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| (0..r).map(|k| cube[i][k][j].clone()).collect())
                    .collect()
            })
            .collect()
    };

    Ok(SecondOrderAssociators {
        l_hat: transpose(&rr), // l_hat^i_jk = r^i_kj
        m_hat: transpose(&l),  // m_hat^i_jk = l^i_kj
        r_hat: transpose(&m),  // r_hat^i_jk = m^i_kj
        l,
        m,
        r: rr,
    })
}

/// Both routes to the third-order associators.
pub fn third_order_associators(
    f: &RationalJetVector,
) -> Result<DualRoute<ThirdOrderAssociators>> {
    require_order(f, "third-order associators", 4)?;
    let second = second_order_direct(&first_order_direct(f)?)?;
    let direct = third_order_direct(&second)?;
    let formula = third_order_formula(&extract_structure_tensors(f)?)?;
    Ok(DualRoute { direct, formula })
}

fn linear_coefficients(r: usize, cube: &JetCube) -> Result<Tensor4> {
    let mut out = Tensor4::zeros(r);
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                for l in 0..r {
                    let key = ExponentVector::unit(r, l);
                    out.set(i, j, k, l, cube[i][j][k].coefficient(&key)?);
                }
            }
        }
    }
    Ok(out)
}

/// Third-order associators as the linear coefficients of the
/// second-order jets.
pub fn third_order_direct(second: &SecondOrderAssociators) -> Result<ThirdOrderAssociators> {
    let r = second.l.len();
    Ok(ThirdOrderAssociators {
        l: linear_coefficients(r, &second.l)?,
        l_hat: linear_coefficients(r, &second.l_hat)?,
        m: linear_coefficients(r, &second.m)?,
        m_hat: linear_coefficients(r, &second.m_hat)?,
        r: linear_coefficients(r, &second.r)?,
        r_hat: linear_coefficients(r, &second.r_hat)?,
    })
}

/// Third-order tensor from the structure constants plus the permutation
/// identities for the remaining five families.
pub fn third_order_formula(st: &StructureTensors) -> Result<ThirdOrderAssociators> {
    let r = st.a.dim();
    let two = crate::rational::rat(2, 1);

    let mut l = Tensor4::zeros(r);
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                for q in 0..r {
                    // l^i_jkl = a^i_js a^s_kl - a^s_jk a^i_sl + 2(d^i_jkl - b^i_jkl)
                    let mut acc =
                        (st.d.get(i, j, k, q).clone() - st.b.get(i, j, k, q).clone()) * two.clone();
                    for s in 0..r {
                        acc += st.a.get(i, j, s).clone() * st.a.get(s, k, q).clone();
                        acc -= st.a.get(s, j, k).clone() * st.a.get(i, s, q).clone();
                    }
                    l.set(i, j, k, q, acc);
                }
            }
        }
    }

    // every other family is a lower-index permutation of l
    let permuted = |pick: fn(usize, usize, usize) -> (usize, usize, usize)| -> Tensor4 {
        let mut out = Tensor4::zeros(r);
        for i in 0..r {
            for a in 0..r {
                for b in 0..r {
                    for c in 0..r {
                        let (x, y, z) = pick(a, b, c);
                        out.set(i, a, b, c, l.get(i, x, y, z).clone());
                    }
                }
            }
        }
        out
    };

    Ok(ThirdOrderAssociators {
        m: permuted(|a, b, c| (c, a, b)),     // m^i_abc = l^i_cab
        r: permuted(|a, b, c| (b, c, a)),     // r^i_abc = l^i_bca
        l_hat: permuted(|a, b, c| (a, c, b)), // l_hat^i_abc = l^i_acb
        r_hat: permuted(|a, b, c| (c, b, a)), // r_hat^i_abc = l^i_cba
        m_hat: permuted(|a, b, c| (b, a, c)), // m_hat^i_abc = l^i_bac
        l,
    })
}

/// JSON-portable tensor export: the bracket constants and, when computed,
/// the third-order associator tensor. Indices are zero-based; entries are
/// `[i, j, k, "p/q"]` rows holding only the nonzero values.
/// One `[i, j, k, "p/q"]` row of the bracket-constant export.
pub type CEntry = (usize, usize, usize, String);
/// One `[i, j, k, l, "p/q"]` row of the third-order export.
pub type L3Entry = (usize, usize, usize, usize, String);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorExport {
    pub dimension: usize,
    pub c: Vec<CEntry>,
    pub l3: Option<Vec<L3Entry>>,
}

impl TensorExport {
    pub fn new(c: &Tensor3, l3: Option<&Tensor4>) -> Self {
        Self {
            dimension: c.dim(),
            c: c
                .nonzero()
                .map(|([i, j, k], v)| (i, j, k, format_rational(v)))
                .collect(),
            l3: l3.map(|t| {
                t.nonzero()
                    .map(|([i, j, k, l], v)| (i, j, k, l, format_rational(v)))
                    .collect()
            }),
        }
    }

    pub fn c_tensor(&self) -> Result<Tensor3> {
        let mut out = Tensor3::zeros(self.dimension);
        for (i, j, k, raw) in &self.c {
            if *i >= self.dimension || *j >= self.dimension || *k >= self.dimension {
                return Err(Error::InvalidModel("tensor index out of range".into()));
            }
            out.set(*i, *j, *k, parse_rational(raw)?);
        }
        Ok(out)
    }

    pub fn l3_tensor(&self) -> Result<Option<Tensor4>> {
        let Some(entries) = &self.l3 else {
            return Ok(None);
        };
        let mut out = Tensor4::zeros(self.dimension);
        for (i, j, k, l, raw) in entries {
            if [*i, *j, *k, *l].iter().any(|&x| x >= self.dimension) {
                return Err(Error::InvalidModel("tensor index out of range".into()));
            }
            out.set(*i, *j, *k, *l, parse_rational(raw)?);
        }
        Ok(Some(out))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("export serializes")
    }

    pub fn from_json(raw: &str) -> Result<Self> {
        Ok(serde_json::from_str(raw)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::LoopModel;
    use crate::octonion::SignedTable;
    use crate::rational::rat;

    #[test]
    fn abelian_tensors_vanish() {
        let f = LoopModel::abelian().multiplication_jet(3).unwrap();
        let st = extract_structure_tensors(&f).unwrap();
        assert!(st.a.is_zero());
        assert!(st.b.is_zero());
        assert!(st.d.is_zero());
        assert!(st.c.is_zero());
    }

    #[test]
    fn heisenberg_structure_constants() {
        let f = LoopModel::heisenberg().multiplication_jet(3).unwrap();
        let st = extract_structure_tensors(&f).unwrap();
        // a^3_12 = 1, everything else zero (zero-based: a[2][0][1])
        assert_eq!(st.a.get(2, 0, 1), &rat(1, 1));
        assert_eq!(st.a.nonzero().count(), 1);
        assert_eq!(st.c.get(2, 0, 1), &rat(1, 1));
        assert_eq!(st.c.get(2, 1, 0), &rat(-1, 1));
    }

    #[test]
    fn octonion_bracket_constants_match_table() {
        let f = LoopModel::octonion_chart().multiplication_jet(3).unwrap();
        let st = extract_structure_tensors(&f).unwrap();
        let table = SignedTable::octonion();
        // c^i_jk = 2 t^i_jk where Im(e_j e_k) = t e_index
        for j in 1..8usize {
            for k in 1..8usize {
                for i in 1..8usize {
                    let expected = if j != k && table.index[j][k] == i {
                        rat(2 * i64::from(table.sign[j][k]), 1)
                    } else {
                        rat(0, 1)
                    };
                    assert_eq!(st.c.get(i - 1, j - 1, k - 1), &expected, "c^{i}_{j}{k}");
                }
            }
        }
    }

    #[test]
    fn auxiliary_initial_conditions() {
        for model in [
            LoopModel::heisenberg(),
            LoopModel::quaternion_chart(),
            LoopModel::octonion_chart(),
        ] {
            let f = model.multiplication_jet(3).unwrap();
            let aux = compute_auxiliary(&f).unwrap();
            let r = f.dimension();
            let origin = vec![Rational::zero(); r];
            for i in 0..r {
                for j in 0..r {
                    let delta = if i == j { rat(1, 1) } else { rat(0, 1) };
                    assert_eq!(aux.u[i][j].evaluate(&origin).unwrap(), delta);
                    assert_eq!(aux.v[i][j].evaluate(&origin).unwrap(), delta);
                    for k in 0..r {
                        assert!(aux.u2[i][j][k].evaluate(&origin).unwrap().is_zero());
                        assert!(aux.v2[i][j][k].evaluate(&origin).unwrap().is_zero());
                        // symmetry of the tilde functions
                        assert_eq!(aux.u2[i][j][k], aux.u2[i][k][j]);
                        assert_eq!(aux.v2[i][j][k], aux.v2[i][k][j]);
                    }
                }
            }
        }
    }

    #[test]
    fn abelian_auxiliary_frozen() {
        let f = LoopModel::abelian().multiplication_jet(3).unwrap();
        let aux = compute_auxiliary(&f).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let delta = if i == j { rat(1, 1) } else { rat(0, 1) };
                assert_eq!(aux.u[i][j], RationalJet::constant(3, 2, delta.clone()));
                assert_eq!(aux.v[i][j], RationalJet::constant(3, 2, delta.clone()));
                assert_eq!(aux.w[i][j], RationalJet::constant(3, 2, delta * rat(-2, 1)));
                for k in 0..3 {
                    assert!(aux.u2[i][j][k].is_zero());
                    assert!(aux.v2[i][j][k].is_zero());
                }
            }
        }
    }

    #[test]
    fn octonion_c_is_totally_antisymmetric() {
        let f = LoopModel::octonion_chart().multiplication_jet(3).unwrap();
        let st = extract_structure_tensors(&f).unwrap();
        for i in 0..7 {
            for j in 0..7 {
                for k in 0..7 {
                    let c = st.c.get(i, j, k).clone();
                    assert!(
                        c == rat(0, 1) || c == rat(2, 1) || c == rat(-2, 1),
                        "unexpected entry {c}"
                    );
                    // antisymmetry under swapping any two of (i, j, k)
                    assert_eq!(&-c.clone(), st.c.get(i, k, j));
                    assert_eq!(&-c.clone(), st.c.get(j, i, k));
                    assert_eq!(&-c.clone(), st.c.get(k, j, i));
                }
            }
        }
    }

    #[test]
    fn first_order_initial_conditions() {
        // l, r, m vanish whenever either remaining argument is the unit
        let f = LoopModel::octonion_chart().multiplication_jet(3).unwrap();
        let routes = first_order_associators(&f).unwrap();
        let r = 7;
        let g_slots: Vec<usize> = (0..r).collect();
        let h_slots: Vec<usize> = (r..2 * r).collect();
        for family in [&routes.direct.l, &routes.direct.r, &routes.direct.m] {
            for row in family {
                for jet in row {
                    assert!(jet.project(&g_slots).unwrap().is_zero());
                    assert!(jet.project(&h_slots).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn second_order_families_vanish_at_origin() {
        let f = LoopModel::octonion_chart().multiplication_jet(4).unwrap();
        let routes = second_order_associators(&f).unwrap();
        let origin = vec![Rational::zero(); 7];
        for cube in [
            &routes.direct.l,
            &routes.direct.l_hat,
            &routes.direct.m,
            &routes.direct.m_hat,
            &routes.direct.r,
            &routes.direct.r_hat,
        ] {
            for plane in cube {
                for row in plane {
                    for jet in row {
                        assert!(jet.evaluate(&origin).unwrap().is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn heisenberg_auxiliary_frozen() {
        let f = LoopModel::heisenberg().multiplication_jet(3).unwrap();
        let aux = compute_auxiliary(&f).unwrap();
        // u^3_1(h) = h^2 (zero-based u[2][0] = variable 1)
        assert_eq!(aux.u[2][0], RationalJet::variable(3, 2, 1));
        assert_eq!(aux.u[0][0], RationalJet::constant(3, 2, rat(1, 1)));
        assert!(aux.u[0][1].is_zero());
        assert!(aux.u2[2][0][1].is_zero());
    }

    #[test]
    fn u_linear_part_is_a() {
        // coefficient of h^k in u^i_j equals a^i_jk
        let f = LoopModel::octonion_chart().multiplication_jet(3).unwrap();
        let aux = compute_auxiliary(&f).unwrap();
        let st = extract_structure_tensors(&f).unwrap();
        let r = 7;
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let key = ExponentVector::unit(r, k);
                    assert_eq!(
                        &aux.u[i][j].coefficient(&key).unwrap(),
                        st.a.get(i, j, k),
                        "u[{i}][{j}] linear term {k}"
                    );
                    assert_eq!(
                        &aux.v[i][k].coefficient(&ExponentVector::unit(r, j)).unwrap(),
                        st.a.get(i, j, k),
                        "v[{i}][{k}] linear term {j}"
                    );
                }
            }
        }
    }

    #[test]
    fn associator_vanishes_for_associative_models() {
        for model in [LoopModel::heisenberg(), LoopModel::quaternion_chart()] {
            let f = model.multiplication_jet(3).unwrap();
            assert!(associator_jet(&f).unwrap().is_zero(), "{}", model.name());
        }
    }

    #[test]
    fn associator_initial_conditions_octonion() {
        let f = LoopModel::octonion_chart().multiplication_jet(3).unwrap();
        let a = associator_jet(&f).unwrap();
        assert!(!a.is_zero());
        let r = 7;
        // killing any single argument block kills the jet
        for block in 0..3 {
            let keep: Vec<usize> = (0..3 * r).filter(|v| v / r != block).collect();
            for i in 0..r {
                let restricted = a.component(i).project(&keep).unwrap();
                // projection drops terms supported on the killed block;
                // what remains must be zero
                assert!(restricted.is_zero(), "block {block}, component {i}");
            }
        }
    }

    #[test]
    fn first_order_routes_agree_heisenberg() {
        let f = LoopModel::heisenberg().multiplication_jet(3).unwrap();
        let routes = first_order_associators(&f).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!(routes.direct.l[i][j].is_zero());
                assert!(routes.direct.r[i][j].is_zero());
                assert!(routes.direct.m[i][j].is_zero());
                assert_eq!(routes.formula.l[i][j], routes.direct.l[i][j]);
                assert_eq!(routes.formula.r[i][j], routes.direct.r[i][j]);
                assert_eq!(routes.formula.m[i][j], routes.direct.m[i][j]);
            }
        }
    }

    #[test]
    fn export_roundtrip() {
        let f = LoopModel::octonion_chart().multiplication_jet(4).unwrap();
        let st = extract_structure_tensors(&f).unwrap();
        let l3 = third_order_associators(&f).unwrap().direct.l;
        let export = TensorExport::new(&st.c, Some(&l3));
        let parsed = TensorExport::from_json(&export.to_json()).unwrap();
        assert_eq!(parsed.c_tensor().unwrap(), st.c);
        assert_eq!(parsed.l3_tensor().unwrap().unwrap(), l3);
    }
}
