//! Seeded random generators for tables, quivers, closed words, and
//! potentials. The test batteries and the benchmarks share these so that
//! every randomized statement is reproducible from a printed seed.

use crate::calculus::Automorphism;
use crate::dgla::canonical_classes;
use crate::quiver::{half_degree_floor, Arrow, ExtTable, GradedQuiver};
use crate::words::{
    canonical_cyclic, word_parity, Alphabet, Coeff, CyclicSeries, CyclicWord, Kind, Letter,
    PathSeries,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// The generator used across tests and benchmarks; print the seed with any
/// failure so the run can be replayed.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A small nonzero rational.
pub fn rand_coeff<R: Rng>(rng: &mut R) -> Coeff {
    let num = *[1i64, -1, 2, -2, 3, -3].choose(rng).unwrap();
    let den = *[1i64, 1, 2].choose(rng).unwrap();
    Coeff::new(num.into(), den.into())
}

fn rand_dim<R: Rng>(rng: &mut R, max_dim: u64) -> u64 {
    if max_dim == 0 || rng.gen_bool(0.5) {
        0
    } else {
        rng.gen_range(1..=max_dim)
    }
}

/// A random table satisfying every validation rule: CY symmetry, unit
/// diagonal at the boundary, even middle diagonal of at most 2.
/// `max_arrows` bounds the total arrow count of the generating half.
pub fn rand_ext_table<R: Rng>(
    rng: &mut R,
    d: i64,
    max_vertices: u32,
    max_dim: u64,
    max_arrows: u64,
) -> ExtTable {
    let nv = rng.gen_range(1..=max_vertices);
    let du = d as usize;
    let mut rows: BTreeMap<(u32, u32), Vec<u64>> = BTreeMap::new();
    for i in 0..nv {
        for j in 0..nv {
            let mut row = vec![0u64; du + 1];
            if i == j {
                row[0] = 1;
                row[du] = 1;
            }
            rows.insert((i, j), row);
        }
    }
    let mut budget = max_arrows;
    // dims[i][j][k] for 1 ≤ k ≤ ⌊(d−1)/2⌋ generate freely; CY symmetry
    // fills the mirrored slots
    let gen_top = ((d - 1) / 2) as usize;
    for i in 0..nv {
        for j in 0..nv {
            for k in 1..=gen_top {
                let v = rand_dim(rng, max_dim.min(budget));
                budget -= v;
                rows.get_mut(&(i, j)).unwrap()[k] = v;
                rows.get_mut(&(j, i)).unwrap()[du - k] = v;
            }
        }
    }
    if d % 2 == 0 {
        let m = du / 2;
        for i in 0..nv {
            if budget > 0 && rng.gen_bool(0.3) {
                rows.get_mut(&(i, i)).unwrap()[m] = 2;
                budget -= 1;
            }
            for j in (i + 1)..nv {
                let v = rand_dim(rng, max_dim.min(budget));
                budget -= v;
                rows.get_mut(&(i, j)).unwrap()[m] = v;
                rows.get_mut(&(j, i)).unwrap()[m] = v;
            }
        }
    }
    ExtTable::new(d, rows).expect("sampled rows are well-formed")
}

/// A random half quiver with canonical arrow ids and no forbidden
/// 2-cycles: middle-degree arrows (even d) appear at most once as a loop
/// per vertex and otherwise point from the smaller vertex to the larger.
pub fn rand_half_quiver<R: Rng>(
    rng: &mut R,
    d: i64,
    max_vertices: u32,
    max_arrows: usize,
) -> GradedQuiver {
    let nv = rng.gen_range(1..=max_vertices);
    let lo = half_degree_floor(d);
    let mut counts: BTreeMap<(u32, u32, i64), u32> = BTreeMap::new();
    let mut middle_loops: Vec<u32> = Vec::new();
    let mut arrows = Vec::new();
    for _ in 0..rng.gen_range(0..=max_arrows) {
        let src = rng.gen_range(0..nv);
        let tgt = rng.gen_range(0..nv);
        let deg = rng.gen_range(lo..=0);
        if d % 2 == 0 && deg == (2 - d) / 2 {
            if src == tgt {
                if middle_loops.contains(&src) {
                    continue;
                }
                middle_loops.push(src);
            } else if src > tgt {
                continue;
            }
        }
        let idx = counts.entry((src, tgt, deg)).or_insert(0);
        *idx += 1;
        arrows.push(Arrow { id: format!("x:{src}->{tgt}:{deg}:{idx}"), src, tgt, deg });
    }
    GradedQuiver { d, vertices: (0..nv).collect(), arrows, half: true }
}

/// A random closed composable word of the requested length, if one turns
/// up within a bounded number of random walks.
pub fn rand_closed_word<R: Rng>(rng: &mut R, ab: &Alphabet, len: usize) -> Option<Vec<Letter>> {
    if ab.letters().is_empty() || len == 0 {
        return None;
    }
    'attempt: for _ in 0..64 {
        let first = *ab.letters().choose(rng).unwrap();
        let mut w = vec![first];
        while w.len() < len {
            let cur = w.last().unwrap().tgt;
            let nexts: Vec<Letter> =
                ab.letters().iter().filter(|l| l.src == cur).copied().collect();
            match nexts.choose(rng) {
                Some(l) => w.push(*l),
                None => continue 'attempt,
            }
        }
        if w[len - 1].tgt == w[0].src {
            return Some(w);
        }
    }
    None
}

/// A random cyclic series with up to `terms` terms of lengths
/// `1..=max_len`, no homogeneity constraints.
pub fn rand_series<R: Rng>(
    rng: &mut R,
    ab: &Alphabet,
    terms: usize,
    max_len: usize,
) -> CyclicSeries {
    let mut s = CyclicSeries::zero();
    for _ in 0..terms {
        let len = rng.gen_range(1..=max_len.max(1));
        if let Some(w) = rand_closed_word(rng, ab, len) {
            let c = canonical_cyclic(&w).expect("closed word");
            if !c.is_zero {
                s.add_canonical(c.word, rand_coeff(rng));
            }
        }
    }
    s
}

/// A random series whose words all share one letter-count parity, as the
/// graded bracket identities require.
pub fn rand_parity_homogeneous<R: Rng>(
    rng: &mut R,
    ab: &Alphabet,
    terms: usize,
    max_len: usize,
) -> CyclicSeries {
    let target: u8 = rng.gen_range(0..=1);
    let mut s = CyclicSeries::zero();
    let mut placed = 0;
    for _ in 0..terms * 8 {
        if placed == terms {
            break;
        }
        let len = rng.gen_range(1..=max_len.max(1));
        if let Some(w) = rand_closed_word(rng, ab, len) {
            if word_parity(&w) != target {
                continue;
            }
            let c = canonical_cyclic(&w).expect("closed word");
            if !c.is_zero {
                s.add_canonical(c.word, rand_coeff(rng));
                placed += 1;
            }
        }
    }
    s
}

/// A random homogeneous series of the given function degree, supported on
/// canonical classes of lengths `min_len..=max_len`.
pub fn rand_homogeneous<R: Rng>(
    rng: &mut R,
    ab: &Alphabet,
    func: i64,
    min_len: usize,
    max_len: usize,
    terms: usize,
) -> CyclicSeries {
    let pool: Vec<CyclicWord> =
        (min_len..=max_len).flat_map(|k| canonical_classes(ab, func, k)).collect();
    let mut s = CyclicSeries::zero();
    for w in pool.choose_multiple(rng, terms.min(pool.len())) {
        s.add_canonical(w.clone(), rand_coeff(rng));
    }
    s
}

fn admissible_w0_word(w: &CyclicWord, d: i64) -> bool {
    w.letters().iter().all(|l| {
        matches!(l.kind, Kind::X | Kind::Xi) && !(l.kind == Kind::Xi && l.deg == 2 - d)
    })
}

/// A random admissible minimal potential: homogeneous of degree `3 − d`,
/// every word of length at least 3, supported away from the unit and
/// trace letters and from duals of degree `2 − d`. May be zero when the
/// quiver admits no such word.
pub fn rand_minimal_w0<R: Rng>(
    rng: &mut R,
    ab: &Alphabet,
    max_len: usize,
    terms: usize,
) -> CyclicSeries {
    let d = ab.d();
    let pool: Vec<CyclicWord> = (3..=max_len)
        .flat_map(|k| canonical_classes(ab, 3 - d, k))
        .filter(|w| admissible_w0_word(w, d))
        .collect();
    let mut s = CyclicSeries::zero();
    for w in pool.choose_multiple(rng, terms.min(pool.len())) {
        s.add_canonical(w.clone(), rand_coeff(rng));
    }
    s
}

/// A random flow Hamiltonian: cohomological degree 0 (function degree
/// `2 − d`), lengths 3 and 4. `None` when no such class exists.
pub fn rand_hamiltonian<R: Rng>(rng: &mut R, ab: &Alphabet) -> Option<CyclicSeries> {
    let d = ab.d();
    let s = rand_homogeneous(rng, ab, 2 - d, 3, 4, 2);
    if s.is_zero() {
        None
    } else {
        Some(s)
    }
}

fn single_letter_image(z: Letter, c: Coeff) -> PathSeries {
    let mut img = PathSeries::zero_at(z.src, z.tgt);
    img.add_word(&[z], c).expect("single letter is a path");
    img
}

/// A random bracket-preserving automorphism: dual pairs scaled by
/// reciprocal factors, parallel arrow families permuted jointly with
/// their duals, unit/trace pairs scaled reciprocally.
pub fn rand_symplectic_automorphism<R: Rng>(rng: &mut R, ab: &Alphabet) -> Automorphism {
    let mut phi = Automorphism::identity();
    let mut families: BTreeMap<(u32, u32, i64), Vec<Letter>> = BTreeMap::new();
    for l in ab.letters().iter().filter(|l| l.kind == Kind::X) {
        families.entry((l.src, l.tgt, l.deg)).or_default().push(*l);
    }
    for fam in families.values() {
        let mut perm: Vec<usize> = (0..fam.len()).collect();
        if fam.len() > 1 && rng.gen_bool(0.5) {
            perm.shuffle(rng);
        }
        for (i, &j) in perm.iter().enumerate() {
            if i == j && rng.gen_bool(0.5) {
                continue;
            }
            let c = rand_coeff(rng);
            let zi = fam[i];
            let zj = fam[j];
            let di = ab.dual(&zi).expect("double closes under duals");
            let dj = ab.dual(&zj).expect("double closes under duals");
            phi.set_image(zi, single_letter_image(zj, c.clone()));
            phi.set_image(di, single_letter_image(dj, c.recip()));
        }
    }
    for &v in &ab.vertices() {
        if rng.gen_bool(0.5) {
            let c = rand_coeff(rng);
            let a = Letter::alpha(v);
            let b = Letter::beta(v, ab.d());
            phi.set_image(a, single_letter_image(a, c.clone()));
            phi.set_image(b, single_letter_image(b, c.recip()));
        }
    }
    phi
}
