//! Sparse truncated multivariate power series with a tracked reliable order.
//!
//! A [`Jet`] stores the Taylor coefficients of an analytic function up to a
//! *reliable order*: every coefficient of total degree at most that order is
//! exact, everything above is unknown. Binary operations truncate to the
//! minimum of the operand orders, differentiation lowers the order by one.
//!
//! Invariants maintained by every constructor and operation:
//! - no stored coefficient is zero;
//! - every stored exponent vector has total degree <= the reliable order;
//! - terms are keyed in graded-lexicographic order, so equality is
//!   structural and iteration order is canonical.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::coeff::Coeff;
use crate::error::{Error, Result};

/// Monomial key: one exponent per variable plus the cached total degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector {
    exponents: Vec<u32>,
    total_degree: u32,
}

impl ExponentVector {
    pub fn new(exponents: Vec<u32>) -> Self {
        let total_degree = exponents.iter().sum();
        Self {
            exponents,
            total_degree,
        }
    }

    /// The zero multi-index in `num_vars` variables.
    pub fn zeros(num_vars: usize) -> Self {
        Self {
            exponents: vec![0; num_vars],
            total_degree: 0,
        }
    }

    /// The multi-index of the single variable `var`.
    pub fn unit(num_vars: usize, var: usize) -> Self {
        let mut exponents = vec![0; num_vars];
        exponents[var] = 1;
        Self {
            exponents,
            total_degree: 1,
        }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.total_degree
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.exponents[var]
    }

    fn sum(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        let exponents = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            exponents,
            total_degree: self.total_degree + other.total_degree,
        }
    }

    /// Whether every nonzero exponent sits on one of the listed variables.
    fn supported_on(&self, vars: &[usize]) -> bool {
        self.exponents
            .iter()
            .enumerate()
            .all(|(v, &e)| e == 0 || vars.contains(&v))
    }
}

impl Ord for ExponentVector {
    /// Graded-lexicographic: lower total degree first, ties broken
    /// lexicographically on the exponents.
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree
            .cmp(&other.total_degree)
            .then_with(|| self.exponents.cmp(&other.exponents))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exponents)
    }
}

/// Sparse truncated multivariate power series over coefficients `C`.
#[derive(Clone, PartialEq, Eq)]
pub struct Jet<C: Coeff> {
    num_vars: usize,
    order: u32,
    terms: BTreeMap<ExponentVector, C>,
}

impl<C: Coeff> Jet<C> {
    /// The zero jet.
    ///
    /// Panics when `order` exceeds the global cap (see
    /// [`crate::order_cap`]): a jet beyond the cap indicates a runaway
    /// composition, so construction fails fast.
    pub fn zero(num_vars: usize, order: u32) -> Self {
        assert!(num_vars > 0, "jets need at least one variable");
        assert!(
            order <= crate::order_cap(),
            "order {order} exceeds the global cap {} (override with {})",
            crate::order_cap(),
            crate::ORDER_CAP_ENV,
        );
        Self {
            num_vars,
            order,
            terms: BTreeMap::new(),
        }
    }

    /// A constant jet.
    pub fn constant(num_vars: usize, order: u32, value: C) -> Self {
        let mut jet = Self::zero(num_vars, order);
        if !value.is_zero() {
            jet.terms.insert(ExponentVector::zeros(num_vars), value);
        }
        jet
    }

    /// The jet of the coordinate function `x_var`.
    pub fn variable(num_vars: usize, order: u32, var: usize) -> Self {
        assert!(var < num_vars, "variable index out of range");
        let mut jet = Self::zero(num_vars, order);
        if order >= 1 {
            jet.terms
                .insert(ExponentVector::unit(num_vars, var), C::one());
        }
        jet
    }

    /// A single term `value * x^exponents`, dropped if beyond the order.
    pub fn monomial(num_vars: usize, order: u32, exponents: Vec<u32>, value: C) -> Self {
        assert_eq!(exponents.len(), num_vars, "exponent length mismatch");
        let mut jet = Self::zero(num_vars, order);
        let key = ExponentVector::new(exponents);
        if !value.is_zero() && key.total_degree() <= order {
            jet.terms.insert(key, value);
        }
        jet
    }

    /// Builds a jet from `(exponents, coefficient)` pairs, summing repeats
    /// and dropping zeros and terms beyond the order.
    pub fn from_terms<I>(num_vars: usize, order: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, C)>,
    {
        let mut jet = Self::zero(num_vars, order);
        for (exponents, value) in terms {
            assert_eq!(exponents.len(), num_vars, "exponent length mismatch");
            let key = ExponentVector::new(exponents);
            if key.total_degree() > order {
                continue;
            }
            jet.accumulate(key, value);
        }
        jet
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// The order up to which the stored coefficients are trustworthy.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored (nonzero) terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Canonical graded-lexicographic iteration over the nonzero terms.
    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &C)> {
        self.terms.iter()
    }

    fn accumulate(&mut self, key: ExponentVector, value: C) {
        if value.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(value);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = slot.get().clone() + value;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    /// Coefficient of a monomial, with the contract that only coefficients
    /// within the reliable order may be requested.
    pub fn coefficient(&self, exponents: &ExponentVector) -> Result<C> {
        if exponents.len() != self.num_vars {
            return Err(Error::ExponentLengthMismatch {
                len: exponents.len(),
                num_vars: self.num_vars,
            });
        }
        if exponents.total_degree() > self.order {
            return Err(Error::CoefficientBeyondOrder {
                degree: exponents.total_degree(),
                order: self.order,
            });
        }
        Ok(self
            .terms
            .get(exponents)
            .cloned()
            .unwrap_or_else(C::zero))
    }

    /// Unchecked coefficient lookup (zero for absent keys).
    pub(crate) fn coeff_at(&self, exponents: &ExponentVector) -> C {
        self.terms
            .get(exponents)
            .cloned()
            .unwrap_or_else(C::zero)
    }

    /// Lowers the reliable order (and drops terms beyond it). Truncating to
    /// an order at or above the current one is the identity.
    pub fn truncate_to(&self, order: u32) -> Self {
        if order >= self.order {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .take_while(|(e, _)| e.total_degree() <= order)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        Self {
            num_vars: self.num_vars,
            order,
            terms,
        }
    }

    /// The homogeneous part of the given total degree, kept at the same order.
    pub fn homogeneous_part(&self, degree: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.total_degree() == degree)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        Self {
            num_vars: self.num_vars,
            order: self.order,
            terms,
        }
    }

    fn check_same_space(&self, rhs: &Self) -> Result<()> {
        if self.num_vars != rhs.num_vars {
            return Err(Error::VariableCountMismatch {
                left: self.num_vars,
                right: rhs.num_vars,
            });
        }
        Ok(())
    }

    /// Coefficientwise sum at the minimum of the two reliable orders.
    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.check_same_space(rhs)?;
        let order = self.order.min(rhs.order);
        let mut out = self.truncate_to(order);
        for (e, c) in &rhs.terms {
            if e.total_degree() > order {
                break;
            }
            out.accumulate(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.try_add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), -c.clone()))
            .collect();
        Self {
            num_vars: self.num_vars,
            order: self.order,
            terms,
        }
    }

    /// Multiplies every coefficient by a scalar.
    pub fn scale(&self, factor: &C) -> Self {
        if factor.is_zero() {
            return Self::zero(self.num_vars, self.order);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), c.clone() * factor.clone()))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Self {
            num_vars: self.num_vars,
            order: self.order,
            terms,
        }
    }

    /// Cauchy product truncated to the minimum of the two reliable orders.
    ///
    /// Graded iteration lets both loops break as soon as the combined
    /// degree exceeds the truncation order.
    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.check_same_space(rhs)?;
        let order = self.order.min(rhs.order);
        let mut out = Self::zero(self.num_vars, order);
        for (ea, ca) in &self.terms {
            if ea.total_degree() > order {
                break;
            }
            let budget = order - ea.total_degree();
            for (eb, cb) in &rhs.terms {
                if eb.total_degree() > budget {
                    break;
                }
                out.accumulate(ea.sum(eb), ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    /// Formal partial derivative; the reliable order drops by one
    /// (flooring at zero).
    pub fn try_partial(&self, var: usize) -> Result<Self> {
        if var >= self.num_vars {
            return Err(Error::VariableIndexOutOfRange {
                index: var,
                num_vars: self.num_vars,
            });
        }
        let order = self.order.saturating_sub(1);
        let mut out = Self::zero(self.num_vars, order);
        for (e, c) in &self.terms {
            let exp = e.exponent(var);
            if exp == 0 {
                continue;
            }
            let mut exponents = e.exponents().to_vec();
            exponents[var] -= 1;
            let factor = C::from_u32(exp).expect("small integer fits any Coeff");
            out.accumulate(ExponentVector::new(exponents), c.clone() * factor);
        }
        Ok(out)
    }

    fn validate_substitutions(&self, subs: &[Self]) -> Result<(usize, u32)> {
        if subs.len() != self.num_vars {
            return Err(Error::SubstitutionArity {
                expected: self.num_vars,
                got: subs.len(),
            });
        }
        let target_vars = subs[0].num_vars;
        let sub_order = subs[0].order;
        for (var, s) in subs.iter().enumerate() {
            if s.num_vars != target_vars || s.order != sub_order {
                return Err(Error::SubstitutionSpaceMismatch);
            }
            if !s.coeff_at(&ExponentVector::zeros(target_vars)).is_zero() {
                return Err(Error::SubstitutionConstantTerm { var });
            }
        }
        Ok((target_vars, sub_order))
    }

    /// Evaluates the jet with every variable replaced by a substitution jet.
    ///
    /// All substitutions must live in one common variable space, share one
    /// reliable order, and have zero constant term (which makes the
    /// composition degree-filtered, hence exact at the truncated order).
    pub fn substitute(&self, subs: &[Self]) -> Result<Self> {
        let (target_vars, sub_order) = self.validate_substitutions(subs)?;
        let order = self.order.min(sub_order);
        let mut cache = PowerCache::new(subs, target_vars, order);
        let mut out = Self::zero(target_vars, order);
        for (e, c) in &self.terms {
            // zero constant terms: a degree-d source term only produces
            // image terms of degree >= d.
            if e.total_degree() > order {
                break;
            }
            let product = cache.monomial(e);
            for (pe, pc) in &product.terms {
                out.accumulate(pe.clone(), pc.clone() * c.clone());
            }
        }
        Ok(out)
    }

    /// Renames variables into a larger space: `slot_map[v]` is the target
    /// slot of source variable `v`. The map must be injective.
    pub fn embed(&self, target_num_vars: usize, slot_map: &[usize]) -> Result<Self> {
        if slot_map.len() != self.num_vars {
            return Err(Error::EmbedMapLength {
                len: slot_map.len(),
                num_vars: self.num_vars,
            });
        }
        let mut seen = vec![false; target_num_vars];
        for &slot in slot_map {
            if slot >= target_num_vars {
                return Err(Error::EmbedSlotOutOfRange {
                    slot,
                    target: target_num_vars,
                });
            }
            if seen[slot] {
                return Err(Error::EmbedNotInjective);
            }
            seen[slot] = true;
        }
        let mut out = Self::zero(target_num_vars, self.order);
        for (e, c) in &self.terms {
            let mut exponents = vec![0u32; target_num_vars];
            for (v, &exp) in e.exponents().iter().enumerate() {
                exponents[slot_map[v]] = exp;
            }
            out.terms.insert(ExponentVector::new(exponents), c.clone());
        }
        Ok(out)
    }

    /// Sets every variable outside `slots` to zero and renames the kept
    /// ones down: target variable `v` is source variable `slots[v]`.
    /// Inverse of [`Jet::embed`] on the embedded image.
    pub fn project(&self, slots: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.num_vars];
        for &slot in slots {
            if slot >= self.num_vars {
                return Err(Error::VariableIndexOutOfRange {
                    index: slot,
                    num_vars: self.num_vars,
                });
            }
            if seen[slot] {
                return Err(Error::EmbedNotInjective);
            }
            seen[slot] = true;
        }
        let mut out = Self::zero(slots.len().max(1), self.order);
        if slots.is_empty() {
            // projecting away every variable keeps the constant term only
            let key = ExponentVector::zeros(self.num_vars);
            let c = self.coeff_at(&key);
            return Ok(Self::constant(1, self.order, c));
        }
        for (e, c) in &self.terms {
            if !e.supported_on(slots) {
                continue;
            }
            let exponents = slots.iter().map(|&s| e.exponent(s)).collect();
            out.terms.insert(ExponentVector::new(exponents), c.clone());
        }
        Ok(out)
    }

    /// Exact evaluation at a point.
    pub fn evaluate(&self, point: &[C]) -> Result<C> {
        if point.len() != self.num_vars {
            return Err(Error::VariableCountMismatch {
                left: self.num_vars,
                right: point.len(),
            });
        }
        let mut acc = C::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (v, &exp) in e.exponents().iter().enumerate() {
                for _ in 0..exp {
                    term = term * point[v].clone();
                }
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// First (component-free) offending coefficient between two jets, if any:
    /// the graded-lex smallest key where they differ, with both values.
    pub fn first_difference(&self, rhs: &Self) -> Option<(ExponentVector, C, C)> {
        let order = self.order.min(rhs.order);
        let mut keys: Vec<&ExponentVector> = self
            .terms
            .keys()
            .chain(rhs.terms.keys())
            .filter(|e| e.total_degree() <= order)
            .collect();
        keys.sort();
        keys.dedup();
        for key in keys {
            let a = self.coeff_at(key);
            let b = rhs.coeff_at(key);
            if a != b {
                return Some((key.clone(), a, b));
            }
        }
        None
    }
}

impl<C: Coeff> fmt::Debug for Jet<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet[{} vars, O({})](", self.num_vars, self.order)?;
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{:?}*x^{:?}", c, e.exponents())?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

/// Memoized powers of substitution jets, shared across the terms of one
/// composition (and across the components of a jet-vector composition).
struct PowerCache<'a, C: Coeff> {
    subs: &'a [Jet<C>],
    powers: Vec<Vec<Jet<C>>>,
    products: BTreeMap<ExponentVector, Jet<C>>,
    target_vars: usize,
    order: u32,
}

impl<'a, C: Coeff> PowerCache<'a, C> {
    fn new(subs: &'a [Jet<C>], target_vars: usize, order: u32) -> Self {
        let powers = subs
            .iter()
            .map(|s| vec![Jet::constant(target_vars, order, C::one()), s.truncate_to(order)])
            .collect();
        Self {
            subs,
            powers,
            products: BTreeMap::new(),
            target_vars,
            order,
        }
    }

    fn power(&mut self, var: usize, exp: u32) -> Jet<C> {
        while self.powers[var].len() <= exp as usize {
            let next = {
                let known = &self.powers[var];
                known
                    .last()
                    .unwrap()
                    .try_mul(&self.subs[var].truncate_to(self.order))
                    .expect("powers share one space")
            };
            self.powers[var].push(next);
        }
        self.powers[var][exp as usize].clone()
    }

    fn monomial(&mut self, key: &ExponentVector) -> Jet<C> {
        if let Some(hit) = self.products.get(key) {
            return hit.clone();
        }
        let mut acc = Jet::constant(self.target_vars, self.order, C::one());
        for (var, &exp) in key.exponents().iter().enumerate() {
            if exp == 0 {
                continue;
            }
            let p = self.power(var, exp);
            acc = acc.try_mul(&p).expect("powers share one space");
        }
        self.products.insert(key.clone(), acc.clone());
        acc
    }
}

/// A fixed-dimension family of jets sharing one variable space and order,
/// e.g. the components of a chart multiplication map.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JetVector<C: Coeff> {
    components: Vec<Jet<C>>,
}

impl<C: Coeff> JetVector<C> {
    pub fn new(components: Vec<Jet<C>>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InconsistentComponents);
        }
        let num_vars = components[0].num_vars();
        let order = components[0].order();
        if components
            .iter()
            .any(|c| c.num_vars() != num_vars || c.order() != order)
        {
            return Err(Error::InconsistentComponents);
        }
        Ok(Self { components })
    }

    pub fn zero(dimension: usize, num_vars: usize, order: u32) -> Self {
        Self {
            components: (0..dimension).map(|_| Jet::zero(num_vars, order)).collect(),
        }
    }

    /// The identity map of a block of variables: component `i` is the
    /// coordinate jet of variable `offset + i`.
    pub fn identity_block(num_vars: usize, offset: usize, dimension: usize, order: u32) -> Self {
        Self {
            components: (0..dimension)
                .map(|i| Jet::variable(num_vars, order, offset + i))
                .collect(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.components.len()
    }

    pub fn num_vars(&self) -> usize {
        self.components[0].num_vars()
    }

    pub fn order(&self) -> u32 {
        self.components[0].order()
    }

    pub fn component(&self, i: usize) -> &Jet<C> {
        &self.components[i]
    }

    pub fn components(&self) -> &[Jet<C>] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Jet<C>> {
        self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Jet::is_zero)
    }

    pub fn truncate_to(&self, order: u32) -> Self {
        Self {
            components: self.components.iter().map(|c| c.truncate_to(order)).collect(),
        }
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        if self.dimension() != rhs.dimension() {
            return Err(Error::InconsistentComponents);
        }
        let components = self
            .components
            .iter()
            .zip(&rhs.components)
            .map(|(a, b)| a.try_add(b))
            .collect::<Result<_>>()?;
        Ok(Self { components })
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        if self.dimension() != rhs.dimension() {
            return Err(Error::InconsistentComponents);
        }
        let components = self
            .components
            .iter()
            .zip(&rhs.components)
            .map(|(a, b)| a.try_sub(b))
            .collect::<Result<_>>()?;
        Ok(Self { components })
    }

    pub fn neg(&self) -> Self {
        Self {
            components: self.components.iter().map(Jet::neg).collect(),
        }
    }

    /// Componentwise composition with one shared substitution list; the
    /// power/product caches are shared across components.
    pub fn compose(&self, subs: &[Jet<C>]) -> Result<Self> {
        let (target_vars, sub_order) = self.components[0].validate_substitutions(subs)?;
        let order = self.order().min(sub_order);
        let mut cache = PowerCache::new(subs, target_vars, order);
        let mut out = Vec::with_capacity(self.dimension());
        for comp in &self.components {
            let mut jet = Jet::zero(target_vars, order);
            for (e, c) in &comp.terms {
                if e.total_degree() > order {
                    break;
                }
                let product = cache.monomial(e);
                for (pe, pc) in &product.terms {
                    jet.accumulate(pe.clone(), pc.clone() * c.clone());
                }
            }
            out.push(jet);
        }
        Ok(Self { components: out })
    }

    /// Composition with the components of other jet vectors as arguments,
    /// concatenated in order. `f.apply(&[a, b])` is `f(a, b)`.
    pub fn apply(&self, args: &[&JetVector<C>]) -> Result<Self> {
        let subs: Vec<Jet<C>> = args
            .iter()
            .flat_map(|v| v.components.iter().cloned())
            .collect();
        self.compose(&subs)
    }

    pub fn embed(&self, target_num_vars: usize, slot_map: &[usize]) -> Result<Self> {
        let components = self
            .components
            .iter()
            .map(|c| c.embed(target_num_vars, slot_map))
            .collect::<Result<_>>()?;
        Ok(Self { components })
    }

    pub fn project(&self, slots: &[usize]) -> Result<Self> {
        let components = self
            .components
            .iter()
            .map(|c| c.project(slots))
            .collect::<Result<_>>()?;
        Ok(Self { components })
    }

    /// First offending coefficient against another jet vector: smallest
    /// component index, then graded-lex smallest exponent vector.
    pub fn first_difference(&self, rhs: &Self) -> Option<(usize, ExponentVector, C, C)> {
        for (i, (a, b)) in self.components.iter().zip(&rhs.components).enumerate() {
            if let Some((e, lhs, rhs)) = a.first_difference(b) {
                return Some((i, e, lhs, rhs));
            }
        }
        None
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $delegate:ident) => {
        impl<'a, 'b, C: Coeff> std::ops::$trait<&'b Jet<C>> for &'a Jet<C> {
            type Output = Jet<C>;
            fn $method(self, rhs: &'b Jet<C>) -> Jet<C> {
                self.$delegate(rhs).expect("jet operands share one space")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl<C: Coeff> std::ops::Neg for &Jet<C> {
    type Output = Jet<C>;
    fn neg(self) -> Jet<C> {
        Jet::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::{Rational, RationalJet};
    use num_traits::Zero;

    fn x(order: u32) -> RationalJet {
        Jet::variable(1, order, 0)
    }

    fn c1(order: u32) -> RationalJet {
        Jet::constant(1, order, rat(1, 1))
    }

    #[test]
    fn add_basic() {
        // (1 + x) + (-1 + x) = 2x
        let a = c1(3).try_add(&x(3)).unwrap();
        let b = c1(3).neg().try_add(&x(3)).unwrap();
        let sum = a.try_add(&b).unwrap();
        assert_eq!(sum, x(3).scale(&rat(2, 1)));
    }

    #[test]
    fn add_identity() {
        let a = c1(2).try_add(&x(2)).unwrap();
        let z = RationalJet::zero(1, 2);
        assert_eq!(a.try_add(&z).unwrap(), a);
    }

    #[test]
    fn add_truncation_budget() {
        // (x, order 3) + (x^2, order 2) = x + x^2 at order 2
        let a = x(3);
        let b = RationalJet::monomial(1, 2, vec![2], rat(1, 1));
        let sum = a.try_add(&b).unwrap();
        assert_eq!(sum.order(), 2);
        let expected = RationalJet::from_terms(1, 2, vec![(vec![1], rat(1, 1)), (vec![2], rat(1, 1))]);
        assert_eq!(sum, expected);
    }

    #[test]
    fn mul_truncates() {
        // (1 + x)(1 - x) at order 2 = 1 - x^2
        let a = c1(2).try_add(&x(2)).unwrap();
        let b = c1(2).try_sub(&x(2)).unwrap();
        let prod = a.try_mul(&b).unwrap();
        let expected =
            RationalJet::from_terms(1, 2, vec![(vec![0], rat(1, 1)), (vec![2], rat(-1, 1))]);
        assert_eq!(prod, expected);
    }

    #[test]
    fn mul_identity() {
        let a = RationalJet::from_terms(
            2,
            3,
            vec![(vec![1, 0], rat(2, 3)), (vec![1, 2], rat(-5, 7))],
        );
        let one = RationalJet::constant(2, 3, rat(1, 1));
        assert_eq!(a.try_mul(&one).unwrap(), a);
    }

    #[test]
    fn mul_hand_expansion() {
        // (1 + x + x^2)(1 + x) at order 2 = 1 + 2x + 2x^2
        let a = RationalJet::from_terms(
            1,
            2,
            vec![(vec![0], rat(1, 1)), (vec![1], rat(1, 1)), (vec![2], rat(1, 1))],
        );
        let b = c1(2).try_add(&x(2)).unwrap();
        let expected = RationalJet::from_terms(
            1,
            2,
            vec![(vec![0], rat(1, 1)), (vec![1], rat(2, 1)), (vec![2], rat(2, 1))],
        );
        assert_eq!(a.try_mul(&b).unwrap(), expected);
    }

    #[test]
    fn mul_var_mismatch() {
        let a = RationalJet::zero(1, 2);
        let b = RationalJet::zero(2, 2);
        assert!(matches!(
            a.try_mul(&b),
            Err(Error::VariableCountMismatch { .. })
        ));
    }

    #[test]
    fn partial_basic() {
        // d(x^2 y)/dx = 2xy
        let a = RationalJet::monomial(2, 3, vec![2, 1], rat(1, 1));
        let d = a.try_partial(0).unwrap();
        assert_eq!(d.order(), 2);
        assert_eq!(d, RationalJet::monomial(2, 2, vec![1, 1], rat(2, 1)));
    }

    #[test]
    fn partial_constant_is_zero() {
        let a = RationalJet::constant(2, 3, rat(5, 1));
        assert!(a.try_partial(1).unwrap().is_zero());
    }

    #[test]
    fn partials_commute() {
        let a = RationalJet::monomial(2, 4, vec![2, 2], rat(1, 1));
        let xy = a.try_partial(0).unwrap().try_partial(1).unwrap();
        let yx = a.try_partial(1).unwrap().try_partial(0).unwrap();
        assert_eq!(xy, yx);
    }

    #[test]
    fn partial_bad_index() {
        let a = RationalJet::zero(2, 2);
        assert!(matches!(
            a.try_partial(2),
            Err(Error::VariableIndexOutOfRange { .. })
        ));
    }

    #[test]
    fn substitute_basic() {
        // y -> x + x^2 into y^2, order 3: x^2 + 2x^3
        let y2 = RationalJet::monomial(1, 3, vec![2], rat(1, 1));
        let s = RationalJet::from_terms(1, 3, vec![(vec![1], rat(1, 1)), (vec![2], rat(1, 1))]);
        let out = y2.substitute(&[s]).unwrap();
        let expected =
            RationalJet::from_terms(1, 3, vec![(vec![2], rat(1, 1)), (vec![3], rat(2, 1))]);
        assert_eq!(out, expected);
    }

    #[test]
    fn substitute_identity() {
        let a = RationalJet::from_terms(
            2,
            3,
            vec![(vec![1, 1], rat(3, 2)), (vec![0, 2], rat(-1, 3))],
        );
        let subs = vec![
            RationalJet::variable(2, 3, 0),
            RationalJet::variable(2, 3, 1),
        ];
        assert_eq!(a.substitute(&subs).unwrap(), a);
    }

    #[test]
    fn substitute_zero() {
        // y -> 0 into 1 + y + y^2 = 1
        let a = RationalJet::from_terms(
            1,
            2,
            vec![(vec![0], rat(1, 1)), (vec![1], rat(1, 1)), (vec![2], rat(1, 1))],
        );
        let out = a.substitute(&[RationalJet::zero(1, 2)]).unwrap();
        assert_eq!(out, RationalJet::constant(1, 2, rat(1, 1)));
    }

    #[test]
    fn substitute_rejects_constant_term() {
        let a = x(2);
        let s = RationalJet::constant(1, 2, rat(1, 1));
        assert!(matches!(
            a.substitute(&[s]),
            Err(Error::SubstitutionConstantTerm { var: 0 })
        ));
    }

    #[test]
    fn substitute_rejects_arity_mismatch() {
        let a = RationalJet::zero(2, 2);
        assert!(matches!(
            a.substitute(&[RationalJet::zero(1, 2)]),
            Err(Error::SubstitutionArity { .. })
        ));
    }

    #[test]
    fn embed_basic() {
        // x (1 var) into slot 1 of 2-var space is y
        let out = x(3).embed(2, &[1]).unwrap();
        assert_eq!(out, RationalJet::variable(2, 3, 1));
    }

    #[test]
    fn embed_project_roundtrip() {
        let a = RationalJet::from_terms(
            2,
            4,
            vec![(vec![1, 2], rat(7, 5)), (vec![2, 0], rat(-2, 1))],
        );
        let emb = a.embed(5, &[3, 1]).unwrap();
        let back = emb.project(&[3, 1]).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn embed_xy_into_three_vars() {
        // xy (2 vars) into slots (2,0) of 3 vars: z*x
        let a = RationalJet::monomial(2, 2, vec![1, 1], rat(1, 1));
        let out = a.embed(3, &[2, 0]).unwrap();
        assert_eq!(out, RationalJet::monomial(3, 2, vec![1, 0, 1], rat(1, 1)));
    }

    #[test]
    fn embed_rejects_bad_maps() {
        let a = RationalJet::zero(2, 2);
        assert!(matches!(a.embed(3, &[1, 1]), Err(Error::EmbedNotInjective)));
        assert!(matches!(
            a.embed(3, &[1, 5]),
            Err(Error::EmbedSlotOutOfRange { .. })
        ));
        assert!(matches!(a.embed(3, &[1]), Err(Error::EmbedMapLength { .. })));
    }

    #[test]
    fn coefficient_contract() {
        let a = RationalJet::from_terms(1, 2, vec![(vec![0], rat(1, 1)), (vec![1], rat(3, 1))]);
        assert_eq!(
            a.coefficient(&ExponentVector::new(vec![1])).unwrap(),
            rat(3, 1)
        );
        assert_eq!(
            x(2).coefficient(&ExponentVector::new(vec![2])).unwrap(),
            Rational::zero()
        );
        assert!(matches!(
            a.coefficient(&ExponentVector::new(vec![3])),
            Err(Error::CoefficientBeyondOrder { .. })
        ));
    }

    #[test]
    fn float_jets_work_too() {
        let a = Jet::<f64>::variable(2, 2, 0);
        let b = Jet::<f64>::variable(2, 2, 1);
        let prod = a.try_mul(&b).unwrap();
        assert_eq!(prod.evaluate(&[2.0, 3.0]).unwrap(), 6.0);
    }

    #[test]
    fn identity_block_applies() {
        let f = JetVector::new(vec![
            RationalJet::from_terms(
                2,
                3,
                vec![(vec![1, 0], rat(1, 1)), (vec![0, 1], rat(1, 1))],
            ),
        ])
        .unwrap();
        let a = JetVector::identity_block(2, 0, 1, 3);
        let b = JetVector::identity_block(2, 1, 1, 3);
        let out = f.apply(&[&a, &b]).unwrap();
        assert_eq!(out, f);
    }
}
