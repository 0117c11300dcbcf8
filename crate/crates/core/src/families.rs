//! Example ideal families and seeded random instances.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{minimal_resolution, BettiTable, DEFAULT_TAYLOR_CAP};
use crate::error::{Error, Result};
use crate::gmpi::{GmpiInstance, SubstitutionFamily};
use crate::monomial::{ExponentVector, MonomialIdeal, VariableContext};

/// All exponent vectors of length `m` and total degree `d`, in descending lex
/// order (`x_1^d` first).
pub fn monomials_of_degree(m: usize, d: u32) -> Vec<ExponentVector> {
    fn fill(prefix: &mut Vec<u32>, m: usize, left: u32, out: &mut Vec<ExponentVector>) {
        if prefix.len() + 1 == m {
            prefix.push(left);
            out.push(ExponentVector::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            fill(prefix, m, left - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if m > 0 {
        fill(&mut Vec::with_capacity(m), m, d, &mut out);
    }
    out
}

fn flat(m: usize) -> Result<VariableContext> {
    if m == 0 {
        return Err(Error::InvalidFamily("need at least one variable".into()));
    }
    VariableContext::flat(m)
}

/// All squarefree monomials of degree `d` in `m` variables.
pub fn squarefree_veronese(m: usize, d: u32) -> Result<MonomialIdeal> {
    if d as usize > m {
        return Err(Error::InvalidFamily(format!(
            "no squarefree monomials of degree {d} in {m} variables"
        )));
    }
    let gens = monomials_of_degree(m, d)
        .into_iter()
        .filter(|g| g.as_slice().iter().all(|&e| e <= 1));
    MonomialIdeal::new(&flat(m)?, gens)
}

/// `(x_1, ..., x_m)^d`.
pub fn power_of_maximal(m: usize, d: u32) -> Result<MonomialIdeal> {
    MonomialIdeal::new(&flat(m)?, monomials_of_degree(m, d))
}

/// Monomials `x_1^{j_1} ... x_n^{j_n}` with `Σ j_i = t` and
/// `j_i <= min(floor((t + 1) / 2), caps_i)`.
pub fn veronese_type(t: u32, caps: &[u32]) -> Result<MonomialIdeal> {
    let half = (t + 1) / 2;
    let gens = monomials_of_degree(caps.len(), t)
        .into_iter()
        .filter(|g| g.as_slice().iter().zip(caps).all(|(&j, &c)| j <= half.min(c)));
    MonomialIdeal::new(&flat(caps.len())?, gens)
}

/// The first `count` monomials of degree `d` in lex order. A lex segment is
/// strongly stable; this is checked rather than assumed.
pub fn lex_segment_stable(m: usize, d: u32, count: usize) -> Result<MonomialIdeal> {
    let all = monomials_of_degree(m, d);
    if count == 0 || count > all.len() {
        return Err(Error::InvalidFamily(format!(
            "lex segment of {count} among {} monomials",
            all.len()
        )));
    }
    let segment: BTreeSet<ExponentVector> = all[..count].iter().cloned().collect();
    for g in &segment {
        for j in 1..m {
            if g.as_slice()[j] == 0 {
                continue;
            }
            for i in 0..j {
                let mut v = g.clone().into_vec();
                v[j] -= 1;
                v[i] += 1;
                if !segment.contains(&ExponentVector::new(v)) {
                    return Err(Error::Invariant("lex segment is not strongly stable".into()));
                }
            }
        }
    }
    MonomialIdeal::new(&flat(m)?, segment)
}

/// Paths of `t` pairwise distinct vertices in the complete multipartite graph
/// with the given part sizes, each recorded as the product of its vertices.
pub fn path_ideal_direct(parts: &[usize], t: usize) -> Result<MonomialIdeal> {
    check_path_params(parts, t)?;
    let ctx = VariableContext::from_sizes(parts)?;
    let part_of: Vec<usize> = (0..ctx.num_vars()).map(|v| ctx.block_of(v).0).collect();
    let mut gens = BTreeSet::new();
    let mut path: Vec<usize> = Vec::with_capacity(t);
    fn extend(
        path: &mut Vec<usize>,
        t: usize,
        part_of: &[usize],
        gens: &mut BTreeSet<ExponentVector>,
    ) {
        if path.len() == t {
            let mut e = vec![0; part_of.len()];
            for &v in path.iter() {
                e[v] = 1;
            }
            gens.insert(ExponentVector::new(e));
            return;
        }
        for v in 0..part_of.len() {
            let adjacent = path.last().map_or(true, |&u| part_of[u] != part_of[v]);
            if adjacent && !path.contains(&v) {
                path.push(v);
                extend(path, t, part_of, gens);
                path.pop();
            }
        }
    }
    extend(&mut path, t, &part_of, &mut gens);
    if gens.is_empty() {
        return Err(Error::InvalidFamily(format!("no path on {t} vertices")));
    }
    MonomialIdeal::new(&ctx, gens)
}

/// The instance inducing the path ideal: the Veronese-type ideal with
/// squarefree Veronese substitutions.
pub fn path_ideal_instance(parts: &[usize], t: usize) -> Result<GmpiInstance> {
    check_path_params(parts, t)?;
    let caps: Vec<u32> = parts.iter().map(|&m| m as u32).collect();
    let inducing = veronese_type(t as u32, &caps)?;
    if inducing.is_zero() {
        return Err(Error::InvalidFamily(format!("no path on {t} vertices")));
    }
    let ctx = VariableContext::from_sizes(parts)?;
    let mut family = SubstitutionFamily::new(&ctx);
    for (l, &m) in parts.iter().enumerate() {
        let degrees: BTreeSet<u32> = inducing.gens().iter().map(|g| g.as_slice()[l]).collect();
        for d in degrees.into_iter().filter(|&d| d > 0) {
            family.insert(l, d, squarefree_veronese(m, d)?)?;
        }
    }
    GmpiInstance::new(&inducing, family)
}

/// The path ideal `I_t` of the complete multipartite graph, built both by
/// enumerating paths and as a substituted ideal; errors if they differ.
pub fn path_ideal_complete_multipartite(parts: &[usize], t: usize) -> Result<MonomialIdeal> {
    let direct = path_ideal_direct(parts, t)?;
    let induced = path_ideal_instance(parts, t)?;
    if induced.ideal() != &direct {
        return Err(Error::Invariant(format!(
            "path enumeration gives {} generators, the substituted ideal {}",
            direct.len(),
            induced.ideal().len()
        )));
    }
    Ok(direct)
}

fn check_path_params(parts: &[usize], t: usize) -> Result<()> {
    if t < 2 {
        return Err(Error::InvalidFamily("paths need at least 2 vertices".into()));
    }
    if parts.len() < 2 || parts.contains(&0) {
        return Err(Error::InvalidFamily(
            "a complete multipartite graph needs at least two non-empty parts".into(),
        ));
    }
    Ok(())
}

/// Substitution families available to random instances and to the shorthand
/// form of instance documents. Every member is generated in one degree and
/// nested along the degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubstitutionKind {
    SquarefreeVeronese,
    PowerOfMaximal,
    /// `x_1 · m^{d-1}`: the lex segment of all monomials divisible by `x_1`.
    LexInitial,
}

impl SubstitutionKind {
    pub const ALL: [SubstitutionKind; 3] = [
        SubstitutionKind::SquarefreeVeronese,
        SubstitutionKind::PowerOfMaximal,
        SubstitutionKind::LexInitial,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            SubstitutionKind::SquarefreeVeronese => "squarefree-veronese",
            SubstitutionKind::PowerOfMaximal => "power-of-maximal",
            SubstitutionKind::LexInitial => "lex-initial",
        }
    }

    pub fn ideal(self, m: usize, d: u32) -> Result<MonomialIdeal> {
        match self {
            SubstitutionKind::SquarefreeVeronese => squarefree_veronese(m, d),
            SubstitutionKind::PowerOfMaximal => power_of_maximal(m, d),
            SubstitutionKind::LexInitial => {
                let count = monomials_of_degree(m, d)
                    .iter()
                    .filter(|g| g.as_slice()[0] > 0)
                    .count();
                lex_segment_stable(m, d, count)
            }
        }
    }

    /// Number of generators of the degree-`d` member in `m` variables.
    pub fn size(self, m: usize, d: u32) -> usize {
        let binom = |a: usize, b: usize| -> usize {
            if b > a {
                return 0;
            }
            (0..b).fold(1usize, |acc, i| acc * (a - i) / (i + 1))
        };
        let d = d as usize;
        match self {
            SubstitutionKind::SquarefreeVeronese => binom(m, d),
            SubstitutionKind::PowerOfMaximal => binom(m + d - 1, d),
            SubstitutionKind::LexInitial => binom(m + d - 2, d - 1),
        }
    }

    pub fn admits(self, m: usize, d: u32) -> bool {
        d >= 1 && (self != SubstitutionKind::SquarefreeVeronese || d as usize <= m)
    }
}

/// Size limits for [`random_instance`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomBounds {
    pub max_blocks: usize,
    pub max_block_size: usize,
    pub max_generators: usize,
    pub max_block_degree: u32,
    /// Largest substitution ideal, so every block resolution stays cheap.
    pub max_substitution_gens: usize,
    /// Largest `|G(L)|`; keeps the Taylor oracle within reach.
    pub max_ideal_gens: usize,
    pub max_attempts: usize,
}

impl Default for RandomBounds {
    fn default() -> Self {
        Self {
            max_blocks: 3,
            max_block_size: 4,
            max_generators: 5,
            max_block_degree: 3,
            max_substitution_gens: 10,
            max_ideal_gens: DEFAULT_TAYLOR_CAP,
            max_attempts: 1000,
        }
    }
}

/// A random instance with substitutions from [`SubstitutionKind`], fully
/// determined by `seed`. Draws violating the bounds are discarded and redrawn
/// from the same generator, and each accepted family is checked to be linear.
pub fn random_instance(seed: u64, bounds: &RandomBounds) -> Result<GmpiInstance> {
    if bounds.max_blocks == 0 || bounds.max_block_size == 0 || bounds.max_generators == 0 || bounds.max_block_degree == 0 {
        return Err(Error::InvalidFamily("random bounds must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..bounds.max_attempts {
        if let Some(inst) = draw(&mut rng, bounds)? {
            return Ok(inst);
        }
    }
    Err(Error::InvalidFamily(format!(
        "no instance within bounds after {} attempts",
        bounds.max_attempts
    )))
}

/// Substitution draws tried for each inducing ideal before it is redrawn.
const SUBSTITUTION_TRIES: usize = 32;

fn draw(rng: &mut ChaCha8Rng, bounds: &RandomBounds) -> Result<Option<GmpiInstance>> {
    let n = rng.gen_range(1..=bounds.max_blocks);
    let count = rng.gen_range(1..=bounds.max_generators);
    let gens: Vec<ExponentVector> = (0..count)
        .map(|_| ExponentVector::new((0..n).map(|_| rng.gen_range(0..=bounds.max_block_degree)).collect()))
        .collect();
    if gens.iter().any(ExponentVector::is_zero) {
        return Ok(None);
    }
    let inducing = MonomialIdeal::new(&VariableContext::flat(n)?, gens)?;
    // every drawn generator minimal, every block used
    if inducing.len() != count || (0..n).any(|l| inducing.gens().iter().all(|g| g.as_slice()[l] == 0)) {
        return Ok(None);
    }
    for _ in 0..SUBSTITUTION_TRIES {
        if let Some(inst) = draw_substitutions(rng, bounds, &inducing)? {
            return Ok(Some(inst));
        }
    }
    Ok(None)
}

fn draw_substitutions(
    rng: &mut ChaCha8Rng,
    bounds: &RandomBounds,
    inducing: &MonomialIdeal,
) -> Result<Option<GmpiInstance>> {
    let n = inducing.context().num_vars();
    let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=bounds.max_block_size)).collect();
    let ctx = VariableContext::from_sizes(&sizes)?;
    let mut family = SubstitutionFamily::new(&ctx);
    for (l, &m) in sizes.iter().enumerate() {
        let degrees: BTreeSet<u32> = inducing
            .gens()
            .iter()
            .map(|g| g.as_slice()[l])
            .filter(|&d| d > 0)
            .collect();
        let kinds: Vec<SubstitutionKind> = SubstitutionKind::ALL
            .into_iter()
            .filter(|k| {
                degrees
                    .iter()
                    .all(|&d| k.admits(m, d) && k.size(m, d) <= bounds.max_substitution_gens)
            })
            .collect();
        let Some(&kind) = kinds.choose(rng) else {
            return Ok(None);
        };
        for d in degrees {
            family.insert(l, d, kind.ideal(m, d)?)?;
        }
    }
    let inst = GmpiInstance::new(inducing, family)?;
    if inst.ideal().len() > bounds.max_ideal_gens {
        return Ok(None);
    }
    for l in 0..n {
        for &d in inst.ladder(l).degrees().iter().filter(|&&d| d > 0) {
            let ideal = inst.family().ideal(l, d)?;
            let table = BettiTable::from_complex(&minimal_resolution(&ideal, DEFAULT_TAYLOR_CAP)?)?;
            if !table.is_linear_resolution(d) {
                return Err(Error::Invariant(format!(
                    "substitution ideal {ideal} has no linear resolution"
                )));
            }
        }
    }
    Ok(Some(inst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn linear(i: &MonomialIdeal, d: u32) -> bool {
        BettiTable::from_complex(&minimal_resolution(i, DEFAULT_TAYLOR_CAP).unwrap())
            .unwrap()
            .is_linear_resolution(d)
    }

    #[test]
    fn small_veroneses() {
        assert_eq!(squarefree_veronese(3, 1).unwrap().len(), 3);
        let v = squarefree_veronese(3, 2).unwrap();
        assert_eq!(v.format(), "(x*y, x*z, y*z)");
        let v42 = squarefree_veronese(4, 2).unwrap();
        assert_eq!(v42.len(), 6);
        assert!(linear(&v42, 2));
        assert!(squarefree_veronese(2, 3).is_err());
    }

    #[test]
    fn powers_of_the_maximal_ideal() {
        assert_eq!(power_of_maximal(2, 2).unwrap().format(), "(x^2, x*y, y^2)");
        assert_eq!(power_of_maximal(1, 4).unwrap().gens(), &[ExponentVector::from([4])]);
        assert!(linear(&power_of_maximal(3, 2).unwrap(), 2));
    }

    #[test]
    fn veronese_type_bounds() {
        assert_eq!(veronese_type(2, &[1, 1]).unwrap().gens(), &[ExponentVector::from([1, 1])]);
        assert_eq!(veronese_type(2, &[2, 2]).unwrap().gens(), &[ExponentVector::from([1, 1])]);
        let v = veronese_type(3, &[2, 2, 2]).unwrap();
        let brute: Vec<ExponentVector> = monomials_of_degree(3, 3)
            .into_iter()
            .filter(|g| g.as_slice().iter().all(|&j| j <= 2))
            .collect();
        assert_eq!(v, MonomialIdeal::new(&VariableContext::flat(3).unwrap(), brute).unwrap());
    }

    #[test]
    fn lex_segments() {
        assert_eq!(lex_segment_stable(2, 2, 1).unwrap().format(), "(x^2)");
        assert_eq!(lex_segment_stable(2, 2, 2).unwrap().format(), "(x^2, x*y)");
        for count in 1..=6 {
            assert!(linear(&lex_segment_stable(3, 2, count).unwrap(), 2));
        }
        assert!(lex_segment_stable(2, 2, 4).is_err());
    }

    #[test]
    fn edges_of_small_bipartite_graphs() {
        let k22 = path_ideal_complete_multipartite(&[2, 2], 2).unwrap();
        assert_eq!(k22.len(), 4);
        assert!(k22.gens().iter().all(|g| k22.context().block_degrees(g) == vec![1, 1]));
        assert_eq!(path_ideal_complete_multipartite(&[1, 1], 2).unwrap().len(), 1);
        assert!(path_ideal_direct(&[2, 2], 1).is_err());
    }

    #[test]
    fn paths_on_three_vertices_agree() {
        for parts in [[2, 2], [2, 3]] {
            let direct = path_ideal_direct(&parts, 3).unwrap();
            let induced = path_ideal_instance(&parts, 3).unwrap();
            assert_eq!(induced.ideal(), &direct);
        }
    }

    #[test]
    fn kinds_report_their_size() {
        for kind in SubstitutionKind::ALL {
            for m in 1..=4 {
                for d in 1..=3 {
                    if kind.admits(m, d) {
                        assert_eq!(kind.ideal(m, d).unwrap().len(), kind.size(m, d), "{kind:?} {m} {d}");
                    }
                }
            }
        }
    }

    #[test]
    fn random_instances_are_reproducible() {
        let b = RandomBounds::default();
        for seed in 0..3 {
            let a = random_instance(seed, &b).unwrap();
            let c = random_instance(seed, &b).unwrap();
            assert_eq!(a.ideal(), c.ideal());
            assert!(a.ideal().len() <= b.max_ideal_gens);
        }
    }

    proptest! {
        #[test]
        fn kinds_nest_along_degree(kind in 0usize..3, m in 1usize..=4, d in 2u32..=3) {
            let kind = SubstitutionKind::ALL[kind];
            prop_assume!(kind.admits(m, d));
            let high = kind.ideal(m, d).unwrap();
            for low in 1..d {
                let low = kind.ideal(m, low).unwrap();
                prop_assert!(high.is_subset(&low));
            }
        }

        #[test]
        fn kinds_are_linear(kind in 0usize..3, m in 1usize..=3, d in 1u32..=3) {
            let kind = SubstitutionKind::ALL[kind];
            prop_assume!(kind.admits(m, d));
            prop_assert!(linear(&kind.ideal(m, d).unwrap(), d));
        }
    }
}
