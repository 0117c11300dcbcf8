//! Monomials and monomial ideals over a block-partitioned set of variables.
//!
//! A [`VariableContext`] names the variables `x_{l1}, ..., x_{l m_l}` of every
//! block `l`. Monomials are stored as [`ExponentVector`]s over the flat list of
//! variables, and a [`MonomialIdeal`] always keeps its minimal generating set in
//! canonical order (lexicographic monomial order, largest first).

use std::cmp::Ordering;
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Block {
    pub name: String,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VariableContext {
    blocks: Vec<Block>,
    offsets: Vec<usize>,
}

impl VariableContext {
    pub fn new(blocks: Vec<Block>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidContext("at least one block is required".into()));
        }
        let mut offsets = Vec::with_capacity(blocks.len() + 1);
        let mut total = 0;
        for b in &blocks {
            if b.size == 0 {
                return Err(Error::InvalidContext(format!("block {} is empty", b.name)));
            }
            offsets.push(total);
            total += b.size;
        }
        offsets.push(total);
        Ok(Self { blocks, offsets })
    }

    /// Blocks of the given sizes, named `x`, `y`, `z`, `w` (or `x1`, `x2`, ... beyond four).
    pub fn from_sizes(sizes: &[usize]) -> Result<Self> {
        let names = default_names(sizes.len());
        Self::new(
            names
                .into_iter()
                .zip(sizes)
                .map(|(name, &size)| Block { name, size })
                .collect(),
        )
    }

    /// `n` blocks of one variable each: the ring of the inducing ideal.
    pub fn flat(n: usize) -> Result<Self> {
        Self::from_sizes(&vec![1; n])
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn num_vars(&self) -> usize {
        self.offsets[self.blocks.len()]
    }

    pub fn block_size(&self, block: usize) -> usize {
        self.blocks[block].size
    }

    pub fn block_name(&self, block: usize) -> &str {
        &self.blocks[block].name
    }

    pub fn block_index(&self, name: &str) -> Option<usize> {
        self.blocks.iter().position(|b| b.name == name)
    }

    pub fn block_range(&self, block: usize) -> Range<usize> {
        self.offsets[block]..self.offsets[block + 1]
    }

    pub fn flat_index(&self, block: usize, pos: usize) -> usize {
        assert!(pos < self.blocks[block].size, "variable position out of range");
        self.offsets[block] + pos
    }

    pub fn block_of(&self, var: usize) -> (usize, usize) {
        assert!(var < self.num_vars(), "variable index out of range");
        let block = self.offsets.partition_point(|&o| o <= var) - 1;
        (block, var - self.offsets[block])
    }

    /// The variables of one block, as a context of single-variable blocks.
    pub fn block_context(&self, block: usize) -> VariableContext {
        let b = &self.blocks[block];
        let blocks = (0..b.size)
            .map(|i| Block {
                name: if b.size == 1 {
                    b.name.clone()
                } else {
                    format!("{}_{}", b.name, i + 1)
                },
                size: 1,
            })
            .collect();
        VariableContext::new(blocks).expect("non-empty block")
    }

    pub fn var_name(&self, var: usize) -> String {
        let (block, pos) = self.block_of(var);
        let b = &self.blocks[block];
        if b.size == 1 {
            b.name.clone()
        } else {
            format!("{}_{}", b.name, pos + 1)
        }
    }

    /// Sum of the exponents of `a` within `block`.
    pub fn block_degree(&self, a: &ExponentVector, block: usize) -> u32 {
        self.check_len(a);
        a.0[self.block_range(block)].iter().sum()
    }

    pub fn block_degrees(&self, a: &ExponentVector) -> Vec<u32> {
        (0..self.num_blocks()).map(|l| self.block_degree(a, l)).collect()
    }

    /// Places a vector over the variables of `block` into the full context.
    pub fn embed(&self, block: usize, local: &ExponentVector) -> ExponentVector {
        let range = self.block_range(block);
        assert_eq!(local.len(), range.len(), "block vector has wrong length");
        let mut out = vec![0; self.num_vars()];
        out[range].copy_from_slice(&local.0);
        ExponentVector(out)
    }

    pub fn restrict(&self, block: usize, a: &ExponentVector) -> ExponentVector {
        self.check_len(a);
        ExponentVector(a.0[self.block_range(block)].to_vec())
    }

    pub fn format_monomial(&self, a: &ExponentVector) -> String {
        self.check_len(a);
        let factors: Vec<String> = a
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    self.var_name(i)
                } else {
                    format!("{}^{}", self.var_name(i), e)
                }
            })
            .collect();
        if factors.is_empty() {
            "1".into()
        } else {
            factors.join("*")
        }
    }

    fn check_len(&self, a: &ExponentVector) {
        assert_eq!(a.len(), self.num_vars(), "exponent vector does not match context");
    }
}

fn default_names(n: usize) -> Vec<String> {
    const LETTERS: [&str; 4] = ["x", "y", "z", "w"];
    if n <= LETTERS.len() {
        LETTERS[..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

/// A point of `N^N`: a monomial exponent or a multidegree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(exponents: Vec<u32>) -> Self {
        debug_assert!(exponents.iter().all(|&e| e < 1 << 24), "exponent overflow");
        Self(exponents)
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    /// `e_var` scaled by `exp`.
    pub fn unit(n: usize, var: usize, exp: u32) -> Self {
        let mut v = vec![0; n];
        v[var] = exp;
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Componentwise `self <= other`, i.e. `x^self` divides `x^other`.
    pub fn divides(&self, other: &Self) -> bool {
        assert_eq!(self.len(), other.len(), "exponent vectors of different length");
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "exponent vectors of different length");
        Self(self.0.iter().zip(&other.0).map(|(&a, &b)| a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "exponent vectors of different length");
        Self(self.0.iter().zip(&other.0).map(|(&a, &b)| a.min(b)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "exponent vectors of different length");
        Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a.checked_add(b).expect("exponent overflow"))
                .collect(),
        )
    }

    /// `self - other` when `other` divides `self`.
    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        assert_eq!(self.len(), other.len(), "exponent vectors of different length");
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Vec<_>>>()
            .map(Self)
    }

    pub fn concat(parts: &[&ExponentVector]) -> Self {
        Self(parts.iter().flat_map(|p| p.0.iter().copied()).collect())
    }

    /// Order used for generator lists: lexicographic monomial order, largest first.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0)
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        Self::new(v)
    }
}

impl<const N: usize> From<[u32; N]> for ExponentVector {
    fn from(v: [u32; N]) -> Self {
        Self::new(v.to_vec())
    }
}

/// A monomial ideal, stored by its minimal generators in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    ctx: VariableContext,
    gens: Vec<ExponentVector>,
}

/// Canonicalizes a generating set to the minimal antichain under divisibility.
pub fn minimalize(
    ctx: &VariableContext,
    gens: impl IntoIterator<Item = ExponentVector>,
) -> Result<MonomialIdeal> {
    let n = ctx.num_vars();
    let mut all: Vec<ExponentVector> = Vec::new();
    for g in gens {
        if g.len() != n {
            return Err(Error::ContextMismatch(format!(
                "generator {g} has {} exponents, context has {n} variables",
                g.len()
            )));
        }
        all.push(g);
    }
    all.sort_by(|a, b| a.total_degree().cmp(&b.total_degree()).then(a.cmp(b)));
    all.dedup();
    let mut kept: Vec<ExponentVector> = Vec::with_capacity(all.len());
    for g in all {
        // kept elements have degree <= deg g, so only they can divide g
        if !kept.iter().any(|k| k.divides(&g)) {
            kept.push(g);
        }
    }
    kept.sort_by(ExponentVector::canonical_cmp);
    Ok(MonomialIdeal {
        ctx: ctx.clone(),
        gens: kept,
    })
}

impl MonomialIdeal {
    pub fn new(
        ctx: &VariableContext,
        gens: impl IntoIterator<Item = ExponentVector>,
    ) -> Result<Self> {
        minimalize(ctx, gens)
    }

    /// Convenience constructor from raw exponent rows.
    pub fn from_exponents(ctx: &VariableContext, rows: &[&[u32]]) -> Result<Self> {
        minimalize(ctx, rows.iter().map(|r| ExponentVector::new(r.to_vec())))
    }

    pub fn zero(ctx: &VariableContext) -> Self {
        Self {
            ctx: ctx.clone(),
            gens: Vec::new(),
        }
    }

    pub fn unit(ctx: &VariableContext) -> Self {
        Self {
            ctx: ctx.clone(),
            gens: vec![ExponentVector::zero(ctx.num_vars())],
        }
    }

    pub fn context(&self) -> &VariableContext {
        &self.ctx
    }

    pub fn gens(&self) -> &[ExponentVector] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_zero()
    }

    pub fn contains(&self, m: &ExponentVector) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &MonomialIdeal) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    pub fn product(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.same_context(other)?;
        let gens = self
            .gens
            .iter()
            .flat_map(|g| other.gens.iter().map(move |h| g.mul(h)));
        minimalize(&self.ctx, gens)
    }

    pub fn sum(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.same_context(other)?;
        minimalize(&self.ctx, self.gens.iter().chain(&other.gens).cloned())
    }

    pub fn intersect(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.same_context(other)?;
        let gens = self
            .gens
            .iter()
            .flat_map(|g| other.gens.iter().map(move |h| g.lcm(h)));
        minimalize(&self.ctx, gens)
    }

    /// Intersection of a non-empty family.
    pub fn intersect_all<'a>(
        ideals: impl IntoIterator<Item = &'a MonomialIdeal>,
    ) -> Result<MonomialIdeal> {
        let mut it = ideals.into_iter();
        let first = it
            .next()
            .ok_or_else(|| Error::Invariant("empty intersection".into()))?
            .clone();
        it.try_fold(first, |acc, next| acc.intersect(next))
    }

    /// The common degree of all generators, if there is one.
    pub fn generated_in_degree(&self) -> Option<u32> {
        let d = self.gens.first()?.total_degree();
        self.gens.iter().all(|g| g.total_degree() == d).then_some(d)
    }

    /// Componentwise maximum of the generators (lcm of G(I)).
    pub fn lcm_of_gens(&self) -> ExponentVector {
        self.gens
            .iter()
            .fold(ExponentVector::zero(self.ctx.num_vars()), |acc, g| acc.lcm(g))
    }

    /// Same generators, reinterpreted in another context with the same number of variables.
    pub fn with_context(&self, ctx: &VariableContext) -> Result<MonomialIdeal> {
        if ctx.num_vars() != self.ctx.num_vars() {
            return Err(Error::ContextMismatch(format!(
                "cannot move an ideal in {} variables to a context with {}",
                self.ctx.num_vars(),
                ctx.num_vars()
            )));
        }
        Ok(MonomialIdeal {
            ctx: ctx.clone(),
            gens: self.gens.clone(),
        })
    }

    pub fn format(&self) -> String {
        let gens: Vec<String> = self
            .gens
            .iter()
            .map(|g| self.ctx.format_monomial(g))
            .collect();
        format!("({})", gens.join(", "))
    }

    fn same_context(&self, other: &MonomialIdeal) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch(format!(
                "ideals live in different variable contexts ({} vs {} variables)",
                self.ctx.num_vars(),
                other.ctx.num_vars()
            )))
        }
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ev(v: &[u32]) -> ExponentVector {
        ExponentVector::new(v.to_vec())
    }

    fn ideal(n: usize, rows: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::from_exponents(&VariableContext::flat(n).unwrap(), rows).unwrap()
    }

    #[test]
    fn minimalize_drops_multiples() {
        let i = ideal(2, &[&[2, 0], &[2, 1], &[1, 1]]);
        assert_eq!(i.gens(), &[ev(&[2, 0]), ev(&[1, 1])]);
        let single = ideal(2, &[&[1, 0]]);
        assert_eq!(single.gens(), &[ev(&[1, 0])]);
    }

    #[test]
    fn minimalize_rejects_mixed_lengths() {
        let ctx = VariableContext::flat(2).unwrap();
        let err = minimalize(&ctx, vec![ev(&[1, 0]), ev(&[1, 0, 0])]).unwrap_err();
        assert!(matches!(err, Error::ContextMismatch(_)));
    }

    #[test]
    fn divides_and_lcm() {
        assert!(ev(&[1, 0]).divides(&ev(&[1, 1])));
        assert!(!ev(&[2, 0]).divides(&ev(&[1, 1])));
        assert_eq!(ev(&[2, 0]).lcm(&ev(&[0, 3])), ev(&[2, 3]));
        assert_eq!(ev(&[1, 1]).lcm(&ev(&[1, 1])), ev(&[1, 1]));
    }

    #[test]
    fn membership() {
        let i = ideal(2, &[&[2, 0], &[1, 1]]);
        assert!(i.contains(&ev(&[2, 3])));
        assert!(!ideal(1, &[&[2]]).contains(&ev(&[1])));
    }

    #[test]
    fn products_and_sums() {
        let xy = ideal(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(
            ideal(2, &[&[1, 0]]).product(&ideal(2, &[&[0, 1]])).unwrap(),
            ideal(2, &[&[1, 1]])
        );
        assert_eq!(
            xy.product(&xy).unwrap().gens(),
            &[ev(&[2, 0]), ev(&[1, 1]), ev(&[0, 2])]
        );
        assert_eq!(xy.sum(&xy).unwrap(), xy);
        assert_eq!(
            ideal(2, &[&[1, 0]]).sum(&ideal(2, &[&[2, 0]])).unwrap(),
            ideal(2, &[&[1, 0]])
        );
    }

    #[test]
    fn intersections() {
        assert_eq!(
            ideal(2, &[&[1, 0]]).intersect(&ideal(2, &[&[0, 1]])).unwrap(),
            ideal(2, &[&[1, 1]])
        );
        let i = ideal(2, &[&[2, 0], &[1, 1]]);
        let j = ideal(2, &[&[0, 2]]);
        let meet = i.intersect(&j).unwrap();
        assert_eq!(meet, ideal(2, &[&[1, 2]]));
        // brute force over all monomials of degree <= 4
        let mut members = Vec::new();
        for a in 0..=4u32 {
            for b in 0..=(4 - a) {
                let m = ev(&[a, b]);
                assert_eq!(meet.contains(&m), i.contains(&m) && j.contains(&m));
                if i.contains(&m) && j.contains(&m) {
                    members.push(m);
                }
            }
        }
        let ctx = VariableContext::flat(2).unwrap();
        assert_eq!(minimalize(&ctx, members).unwrap(), meet);
        assert_eq!(i.intersect(&i).unwrap(), i);
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = ideal(2, &[&[1, 0]]);
        let b = ideal(3, &[&[1, 0, 0]]);
        assert!(matches!(a.intersect(&b), Err(Error::ContextMismatch(_))));
        assert!(matches!(a.product(&b), Err(Error::ContextMismatch(_))));
    }

    #[test]
    fn block_degrees() {
        let ctx = VariableContext::from_sizes(&[2, 3]).unwrap();
        assert_eq!(ctx.block_degree(&ExponentVector::zero(5), 1), 0);
        let a = ev(&[0, 0, 1, 2, 0]);
        assert_eq!(ctx.block_degree(&a, 1), a.total_degree());
        assert_eq!(ctx.block_degree(&a, 0), 0);
        assert_eq!(ctx.block_of(3), (1, 1));
        assert_eq!(ctx.flat_index(1, 1), 3);
        assert_eq!(ctx.format_monomial(&a), "y_1*y_2^2");
        let local = ev(&[1, 2, 0]);
        assert_eq!(ctx.restrict(1, &ctx.embed(1, &local)), local);
    }

    #[test]
    fn canonical_order_is_lex_descending() {
        let i = ideal(2, &[&[0, 2], &[2, 0], &[1, 1]]);
        assert_eq!(i.gens(), &[ev(&[2, 0]), ev(&[1, 1]), ev(&[0, 2])]);
    }

    fn small_vec(n: usize, max: u32) -> impl Strategy<Value = ExponentVector> {
        proptest::collection::vec(0..=max, n).prop_map(ExponentVector::new)
    }

    fn small_ideal(n: usize) -> impl Strategy<Value = MonomialIdeal> {
        proptest::collection::vec(small_vec(n, 3), 1..5).prop_map(move |gens| {
            minimalize(&VariableContext::flat(n).unwrap(), gens).unwrap()
        })
    }

    fn pairwise_oracle(gens: &[ExponentVector]) -> Vec<ExponentVector> {
        let mut out: Vec<ExponentVector> = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            let dominated = gens
                .iter()
                .enumerate()
                .any(|(j, h)| h.divides(g) && (h != g || j < i));
            if !dominated {
                out.push(g.clone());
            }
        }
        out.sort_by(ExponentVector::canonical_cmp);
        out
    }

    proptest! {
        #[test]
        fn minimalize_matches_pairwise_scan(gens in proptest::collection::vec(small_vec(3, 4), 1..20)) {
            let ctx = VariableContext::flat(3).unwrap();
            let i = minimalize(&ctx, gens.clone()).unwrap();
            let oracle = pairwise_oracle(&gens);
            prop_assert_eq!(i.gens(), oracle.as_slice());
            prop_assert_eq!(minimalize(&ctx, i.gens().to_vec()).unwrap(), i);
        }

        #[test]
        fn lcm_is_associative_and_commutative(a in small_vec(3, 5), b in small_vec(3, 5), c in small_vec(3, 5)) {
            prop_assert_eq!(a.lcm(&b), b.lcm(&a));
            prop_assert_eq!(a.lcm(&b).lcm(&c), a.lcm(&b.lcm(&c)));
            prop_assert!(a.divides(&a.lcm(&b)));
        }

        #[test]
        fn membership_agrees_with_expansion(i in small_ideal(2), m in small_vec(2, 5)) {
            // expand I in degrees <= deg m by multiplying generators by all monomials
            let d = m.total_degree();
            let mut expanded = false;
            for g in i.gens() {
                for a in 0..=d {
                    for b in 0..=(d - a) {
                        if g.mul(&ExponentVector::new(vec![a, b])) == m {
                            expanded = true;
                        }
                    }
                }
            }
            prop_assert_eq!(i.contains(&m), expanded);
        }

        #[test]
        fn product_contains_pairwise_products(i in small_ideal(3), j in small_ideal(3)) {
            let p = i.product(&j).unwrap();
            for g in i.gens() {
                for h in j.gens() {
                    prop_assert!(p.contains(&g.mul(h)));
                }
            }
            for g in p.gens() {
                prop_assert!(i.gens().iter().any(|a| j.gens().iter().any(|b| &a.mul(b) == g)));
            }
        }

        #[test]
        fn product_distributes_over_sum(i in small_ideal(3), j in small_ideal(3), k in small_ideal(3)) {
            let lhs = i.product(&j.sum(&k).unwrap()).unwrap();
            let rhs = i.product(&j).unwrap().sum(&i.product(&k).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn intersection_is_minimal_common_multiple_set(i in small_ideal(2), j in small_ideal(2)) {
            let meet = i.intersect(&j).unwrap();
            let bound = i.lcm_of_gens().lcm(&j.lcm_of_gens());
            let mut common = Vec::new();
            for a in 0..=bound.as_slice()[0] {
                for b in 0..=bound.as_slice()[1] {
                    let m = ExponentVector::new(vec![a, b]);
                    prop_assert_eq!(meet.contains(&m), i.contains(&m) && j.contains(&m));
                    if i.contains(&m) && j.contains(&m) {
                        common.push(m);
                    }
                }
            }
            let ctx = VariableContext::flat(2).unwrap();
            prop_assert_eq!(minimalize(&ctx, common).unwrap(), meet);
        }

        #[test]
        fn block_degree_is_additive(a in small_vec(2, 5), b in small_vec(3, 5)) {
            let ctx = VariableContext::from_sizes(&[2, 3]).unwrap();
            let joined = ExponentVector::concat(&[&a, &b]);
            prop_assert_eq!(ctx.block_degree(&joined, 0) + ctx.block_degree(&joined, 1), joined.total_degree());
            prop_assert_eq!(ctx.block_degree(&joined, 0), a.total_degree());
        }
    }
}
