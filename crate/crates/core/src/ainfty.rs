//! Cyclic A∞ structure constants read off a potential through the pairing,
//! plus verification of the defining relations, cyclicity, unitality, and
//! minimality.
//!
//! A potential stores its length-N coefficients as the graded-cyclic
//! symmetrization of the multilinear form `W_N`; the n-ary product is the
//! unique solution of `W_N(y_1,…,y_N) = ⟨m_{N−1}(y_1,…,y_{N−1}), y_N⟩` once
//! the pairing is fixed. Passing between the cyclic form and the products
//! twists by the shift: the `tau` table below carries the reshuffling sign
//! of the shifted arguments and `eps` the pairing sign on a dual pair. Both
//! tables are pinned numerically by the relation/cyclicity batteries in the
//! tests and must move together with the orientation tables in `calculus`.

use crate::calculus::{build_w_can, compose, extract_distinct, Coderivation};
use crate::words::{
    canonical_cyclic, is_closed, rotations_with_signs, word_degree, word_parity, Alphabet, Coeff,
    CyclicSeries, Letter, Kind,
};
use num_traits::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Error, Debug)]
pub enum AinftyError {
    #[error("potential is not homogeneous of function degree {expected}: term `{word}` has degree {found}")]
    NonHomogeneous { expected: i64, word: String, found: i64 },
}

/// The dual basis element `e_z` attached to a coordinate `z`. Its unshifted
/// degree is `1 − deg(z)` (so `e_α` sits in degree 0 and `e_β` in degree
/// `d`), and its endpoints are those of `z` reversed.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct BasisVector {
    letter: Letter,
}

impl BasisVector {
    pub fn new(letter: Letter) -> Self {
        BasisVector { letter }
    }

    pub fn letter(&self) -> &Letter {
        &self.letter
    }

    pub fn degree(&self) -> i64 {
        1 - self.letter.deg
    }

    pub fn endpoints(&self) -> (u32, u32) {
        (self.letter.tgt, self.letter.src)
    }

    pub fn id(&self) -> String {
        format!("e[{}]", self.letter.id())
    }
}

/// Parity of the shifted basis vector `e_z[1]`.
fn pbar(z: &Letter) -> u8 {
    1 ^ z.parity()
}

/// Pairing sign on the dual pair ending in `z`: `⟨e_{z^∨}, e_z⟩ = eps(z)`.
pub(crate) fn eps(z: &Letter, d: i64) -> i64 {
    let s: u8 = if z.is_primal() { 0 } else { 1 };
    let p = z.parity();
    let bit = 1 ^ s ^ p ^ (p & s) ^ (p & s & (d.rem_euclid(2) as u8));
    if bit == 1 {
        -1
    } else {
        1
    }
}

/// Shift twist relating the cyclic form on `(ins, z)` to the product
/// evaluated on `ins`: the Koszul cost of unshuffling the suspended
/// arguments, with one cross term between the argument block and `z`.
pub(crate) fn tau(ins: &[Letter], z: &Letter, d: i64) -> i64 {
    let n = ins.len();
    let mut e: u8 = 0;
    for (i, y) in ins.iter().enumerate() {
        if (n - 1 - i) % 2 == 1 {
            e ^= pbar(y);
        }
    }
    e ^= word_parity(ins) & z.parity() & (d.rem_euclid(2) as u8);
    if e == 1 {
        -1
    } else {
        1
    }
}

/// `W_N` evaluated on an explicit tuple: zero unless the tuple closes up
/// into a nonzero cyclic class supported in `w`, else the class coefficient
/// transported along the rotation sign.
pub fn w_eval(w: &CyclicSeries, tup: &[Letter]) -> Coeff {
    if tup.is_empty() || !is_closed(tup) {
        return Coeff::zero();
    }
    let c = canonical_cyclic(tup).expect("closed nonempty tuple");
    if c.is_zero {
        return Coeff::zero();
    }
    w.coeff(&c.word) * Coeff::from_integer((c.sign as i64).into())
}

/// The CY pairing on basis vectors: `±1` exactly on dual pairs (including
/// `(e_{α_i}, e_{β_i})`), graded-symmetric, of total unshifted degree `d`
/// across each nonzero pair.
#[derive(Clone, Debug)]
pub struct Pairing {
    alphabet: Alphabet,
}

impl Pairing {
    pub fn new(alphabet: &Alphabet) -> Self {
        Pairing { alphabet: alphabet.clone() }
    }

    pub fn d(&self) -> i64 {
        self.alphabet.d()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// `⟨e_u, e_z⟩`.
    pub fn value(&self, u: &Letter, z: &Letter) -> Coeff {
        match self.alphabet.dual(z) {
            Some(dz) if dz == *u => Coeff::from_integer(eps(z, self.alphabet.d()).into()),
            _ => Coeff::zero(),
        }
    }
}

type OutputCombo = BTreeMap<Letter, Coeff>;

/// The n-ary products `m_n` for `n ≤ n_max`, stored sparsely on the tuples
/// where they are nonzero, together with the shifted coderivation they
/// assemble into (used for the relation check).
#[derive(Clone, Debug)]
pub struct StructureConstants {
    d: i64,
    n_max: usize,
    tables: BTreeMap<usize, BTreeMap<Vec<Letter>, OutputCombo>>,
    pub(crate) shifted: Coderivation,
}

impl StructureConstants {
    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `m_n(e_{y_1},…,e_{y_n})` as a combination of basis vectors; the zero
    /// combination when the tuple is absent from the tables.
    pub fn apply(&self, ins: &[Letter]) -> OutputCombo {
        self.tables
            .get(&ins.len())
            .and_then(|t| t.get(ins))
            .cloned()
            .unwrap_or_default()
    }

    /// Arities with at least one nonzero component.
    pub fn arities(&self) -> impl Iterator<Item = usize> + '_ {
        self.tables.iter().filter(|(_, t)| !t.is_empty()).map(|(n, _)| *n)
    }

    /// Minimality is visible as the absence of unary components.
    pub fn m1_is_zero(&self) -> bool {
        self.tables.get(&1).is_none_or(|t| t.is_empty())
    }

    /// Deterministic export: one record per nonzero component, ordered by
    /// arity then input tuple.
    pub fn to_json(&self) -> String {
        let mut records = Vec::new();
        for (n, table) in &self.tables {
            for (ins, combo) in table {
                let inputs: Vec<String> =
                    ins.iter().map(|l| BasisVector::new(*l).id()).collect();
                let output: Vec<serde_json::Value> = combo
                    .iter()
                    .map(|(u, c)| {
                        serde_json::json!({
                            "basis": BasisVector::new(*u).id(),
                            "coeff": c.to_string(),
                        })
                    })
                    .collect();
                records.push(serde_json::json!({
                    "n": n,
                    "inputs": inputs,
                    "output": output,
                }));
            }
        }
        let mut s =
            serde_json::to_string_pretty(&serde_json::Value::Array(records)).expect("serializable");
        s.push('\n');
        s
    }
}

/// Read the products off a potential: the length-N words of `W` determine
/// `m_{N−1}` through the pairing identity, for `N − 1 ≤ n_max`.
pub fn extract_products(
    w: &CyclicSeries,
    pairing: &Pairing,
    n_max: usize,
) -> Result<StructureConstants, AinftyError> {
    let ab = pairing.alphabet();
    let d = ab.d();
    let expected = 3 - d;
    for (c, _) in w.terms() {
        let found = word_degree(c.letters());
        if found != expected {
            return Err(AinftyError::NonHomogeneous { expected, word: c.to_string(), found });
        }
    }
    let mut tables: BTreeMap<usize, BTreeMap<Vec<Letter>, OutputCombo>> = BTreeMap::new();
    let mut filtered = CyclicSeries::zero_with_precision(w.precision());
    for (c, lam) in w.terms() {
        if c.len() > n_max + 1 {
            continue;
        }
        filtered.add_canonical(c.clone(), lam.clone());
        for (rot, _) in rotations_with_signs(c.letters()) {
            let (ins, z) = rot.split_at(rot.len() - 1);
            let z = &z[0];
            let Some(u) = ab.dual(z) else { continue };
            let val = w_eval(w, &rot)
                * Coeff::from_integer((tau(ins, z, d) * eps(z, d)).into());
            if !val.is_zero() {
                tables
                    .entry(ins.len())
                    .or_default()
                    .entry(ins.to_vec())
                    .or_default()
                    .insert(u, val);
            }
        }
    }
    let shifted = extract_distinct(&filtered, ab);
    Ok(StructureConstants { d, n_max, tables, shifted })
}

/// One violated A∞ relation: the input tuple together with the nonzero
/// residual combination.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RelationViolation {
    pub inputs: Vec<Letter>,
    pub residual: Vec<(Letter, Coeff)>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AinftyReport {
    pub pass: bool,
    pub violations: Vec<RelationViolation>,
}

impl AinftyReport {
    pub fn to_json(&self) -> String {
        let violations: Vec<serde_json::Value> = self
            .violations
            .iter()
            .map(|v| {
                let inputs: Vec<String> =
                    v.inputs.iter().map(|l| BasisVector::new(*l).id()).collect();
                let residual: Vec<serde_json::Value> = v
                    .residual
                    .iter()
                    .map(|(u, c)| {
                        serde_json::json!({
                            "basis": BasisVector::new(*u).id(),
                            "coeff": c.to_string(),
                        })
                    })
                    .collect();
                serde_json::json!({ "inputs": inputs, "residual": residual })
            })
            .collect();
        let v = serde_json::json!({ "pass": self.pass, "violations": violations });
        let mut s = serde_json::to_string_pretty(&v).expect("serializable");
        s.push('\n');
        s
    }
}

/// Evaluate every A∞ relation on basis tuples of arity at most `n_max`: the
/// square of the assembled shifted coderivation must vanish componentwise.
pub fn check_ainfty(m: &StructureConstants, n_max: usize) -> AinftyReport {
    let square = compose(&m.shifted, &m.shifted, 1);
    let mut grouped: BTreeMap<Vec<Letter>, Vec<(Letter, Coeff)>> = BTreeMap::new();
    for ((ins, out), c) in &square.comps {
        if ins.len() <= n_max {
            grouped.entry(ins.clone()).or_default().push((*out, c.clone()));
        }
    }
    let violations: Vec<RelationViolation> = grouped
        .into_iter()
        .map(|(inputs, residual)| RelationViolation { inputs, residual })
        .collect();
    AinftyReport { pass: violations.is_empty(), violations }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConditionReport {
    pub pass: bool,
    pub failures: Vec<String>,
}

impl ConditionReport {
    pub fn to_json(&self) -> String {
        let v = serde_json::json!({ "pass": self.pass, "failures": self.failures });
        let mut s = serde_json::to_string_pretty(&v).expect("serializable");
        s.push('\n');
        s
    }
}

fn contains_w_can(w: &CyclicSeries, ab: &Alphabet) -> bool {
    build_w_can(ab).terms().all(|(c, v)| &w.coeff(c) == v)
}

/// Convention battery: (i) the cyclic form reconstructed from the products
/// is invariant under the graded shift of its arguments; (ii) the pairing is
/// graded-symmetric, non-degenerate, and of total degree `d` on dual pairs;
/// (iii) when `W` contains `W_can`, each `e_{α_i}` is a strict two-sided
/// unit for `m_2` and never meets a nonzero higher product; (iv) for pure
/// `W_can`, `m_2` is associative on all composable letter triples.
pub fn check_cyclicity_and_unit(
    m: &StructureConstants,
    pairing: &Pairing,
    w: &CyclicSeries,
) -> ConditionReport {
    let ab = pairing.alphabet();
    let d = ab.d();
    let mut failures = Vec::new();

    // (i) shifted cyclic invariance of the reconstructed form
    for (c, _) in w.terms() {
        if c.len() > m.n_max() + 1 {
            continue;
        }
        let mut base: Option<Coeff> = None;
        for (rot, sig) in rotations_with_signs(c.letters()) {
            let (ins, z) = rot.split_at(rot.len() - 1);
            let z = &z[0];
            let Some(u) = ab.dual(z) else { continue };
            let v = m.apply(ins).get(&u).cloned().unwrap_or_else(Coeff::zero)
                * Coeff::from_integer((eps(z, d) * tau(ins, z, d)).into());
            let want = match &base {
                None => {
                    base = Some(v.clone());
                    continue;
                }
                Some(b) => b * Coeff::from_integer((sig as i64).into()),
            };
            if v != want {
                failures.push(format!("cyclic shift of the form breaks on `{c}`"));
                break;
            }
        }
    }

    // (ii) pairing symmetry, non-degeneracy, degree
    for a in ab.letters() {
        let Some(b) = ab.dual(a) else {
            failures.push(format!("pairing degenerate at `{}`", a.id()));
            continue;
        };
        let lhs = pairing.value(&b, a);
        if lhs.is_zero() {
            failures.push(format!("pairing vanishes on the dual pair of `{}`", a.id()));
        }
        let rhs = pairing.value(a, &b);
        let sym = if pbar(a) & pbar(&b) == 1 { -1i64 } else { 1 };
        if lhs != rhs * Coeff::from_integer(sym.into()) {
            failures.push(format!("pairing symmetry fails on `{}`", a.id()));
        }
        let total = BasisVector::new(*a).degree() + BasisVector::new(b).degree();
        if total != d {
            failures.push(format!("pairing degree {total} != {d} on `{}`", a.id()));
        }
    }

    // (iii) strict unit against the canonical part
    if contains_w_can(w, ab) {
        for v in ab.letters() {
            let left = m.apply(&[Letter::alpha(v.src), *v]);
            let right = m.apply(&[*v, Letter::alpha(v.tgt)]);
            let want: OutputCombo = [(*v, Coeff::from_integer(1.into()))].into();
            if left != want {
                failures.push(format!("left unit fails on `{}`", v.id()));
            }
            if right != want {
                failures.push(format!("right unit fails on `{}`", v.id()));
            }
        }
        for (n, table) in &m.tables {
            if *n < 3 {
                continue;
            }
            for (ins, combo) in table {
                if !combo.is_empty() && ins.iter().any(|l| l.kind == Kind::Alpha) {
                    failures.push(format!(
                        "m_{n} does not vanish on a tuple containing a unit: {:?}",
                        ins.iter().map(|l| l.id()).collect::<Vec<_>>()
                    ));
                }
            }
        }
    }

    // (iv) associativity of the binary product of the pure canonical part
    if w == &build_w_can(ab) {
        let letters = ab.letters();
        for a in letters {
            for b in letters.iter().filter(|b| a.tgt == b.src) {
                let ab_out = m.apply(&[*a, *b]);
                for e in letters.iter().filter(|e| b.tgt == e.src) {
                    let mut lhs: OutputCombo = BTreeMap::new();
                    for (u, cu) in &ab_out {
                        for (t, ct) in m.apply(&[*u, *e]) {
                            let entry = lhs.entry(t).or_insert_with(Coeff::zero);
                            *entry += cu * ct;
                        }
                    }
                    let mut rhs: OutputCombo = BTreeMap::new();
                    for (u, cu) in m.apply(&[*b, *e]) {
                        for (t, ct) in m.apply(&[*a, u]) {
                            let entry = rhs.entry(t).or_insert_with(Coeff::zero);
                            *entry += &cu * ct;
                        }
                    }
                    lhs.retain(|_, c| !c.is_zero());
                    rhs.retain(|_, c| !c.is_zero());
                    if lhs != rhs {
                        failures.push(format!(
                            "associativity fails on ({}, {}, {})",
                            a.id(),
                            b.id(),
                            e.id()
                        ));
                    }
                }
            }
        }
    }

    ConditionReport { pass: failures.is_empty(), failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{check_master, lift_potential};
    use crate::words::parse_potential;

    fn rat(n: i64) -> Coeff {
        Coeff::from_integer(n.into())
    }

    fn loop_alphabet(d: i64, degs: &[i64]) -> Alphabet {
        let letters: Vec<Letter> =
            degs.iter().enumerate().map(|(n, &r)| Letter::x(0, 0, r, n as u32 + 1)).collect();
        Alphabet::new(d, letters).unwrap()
    }

    fn series(ab: &Alphabet, text: &str) -> CyclicSeries {
        parse_potential(text, ab).unwrap().0
    }

    #[test]
    fn binary_product_pin_on_lifted_cube() {
        let ab = loop_alphabet(3, &[0]);
        let x = ab.letter_by_id("x:0->0:0:1").unwrap();
        let xi = ab.letter_by_id("xi:0->0:-1:1").unwrap();
        let w = lift_potential(&series(&ab, "x:0->0:0:1*x:0->0:0:1*x:0->0:0:1"), &ab).unwrap();
        let pairing = Pairing::new(&ab);
        let m = extract_products(&w, &pairing, 6).unwrap();
        assert_eq!(m.apply(&[x, x]), [(xi, rat(1))].into());
        // the pairing identity in the shifted normalization: the form on
        // (x, x, x) is recovered from the product through eps and tau
        let v = m.apply(&[x, x]).get(&xi).cloned().unwrap()
            * Coeff::from_integer((eps(&x, 3) * tau(&[x, x], &x, 3)).into());
        assert_eq!(v, w_eval(&w, &[x, x, x]));
        assert!(check_ainfty(&m, 6).pass);
        assert!(m.m1_is_zero());
    }

    #[test]
    fn w_can_gives_only_a_binary_product() {
        let ab = loop_alphabet(3, &[0]);
        let w = build_w_can(&ab);
        let pairing = Pairing::new(&ab);
        let m = extract_products(&w, &pairing, 6).unwrap();
        assert_eq!(m.arities().collect::<Vec<_>>(), vec![2]);
        let report = check_cyclicity_and_unit(&m, &pairing, &w);
        assert!(report.pass, "{:?}", report.failures);
        assert!(check_ainfty(&m, 6).pass);
    }

    #[test]
    fn unit_and_cyclicity_across_dimensions() {
        for d in 2..=6i64 {
            let degs: Vec<i64> = ((3 - d).div_euclid(2)..=0).collect();
            let ab = loop_alphabet(d, &degs);
            let w = build_w_can(&ab);
            let pairing = Pairing::new(&ab);
            let m = extract_products(&w, &pairing, 6).unwrap();
            let report = check_cyclicity_and_unit(&m, &pairing, &w);
            assert!(report.pass, "d={d}: {:?}", report.failures);
            assert!(check_ainfty(&m, 6).pass, "relations fail at d={d}");
        }
    }

    #[test]
    fn failing_potential_fails_relations_at_the_residual_arity() {
        let ab = loop_alphabet(4, &[0, -1]);
        let w = lift_potential(
            &series(
                &ab,
                "x:0->0:0:1*x:0->0:0:1*x:0->0:-1:2 + x:0->0:0:1*x:0->0:0:1*xi:0->0:-1:2",
            ),
            &ab,
        )
        .unwrap();
        assert!(!check_master(&w, &ab).pass);
        let pairing = Pairing::new(&ab);
        let m = extract_products(&w, &pairing, 6).unwrap();
        let report = check_ainfty(&m, 6);
        assert!(!report.pass);
        // residual {W, W} = 2[x⁴] re-closes from arity-3 components
        assert!(report.violations.iter().all(|v| v.inputs.len() == 3));
        // cyclicity still holds -- it is a property of the extraction, not
        // of the master equation
        let cyc = check_cyclicity_and_unit(&m, &pairing, &w);
        assert!(cyc.pass, "{:?}", cyc.failures);
    }

    #[test]
    fn length_two_words_show_up_as_m1() {
        let ab = loop_alphabet(5, &[-1, 0]);
        // x (deg 0, idx 2) against the dual (deg -2) of the deg -1 loop:
        // a closed homogeneous word of length 2 and degree 3 - d = -2
        let w = series(&ab, "x:0->0:0:2*xi:0->0:-2:1");
        assert_eq!(w.len(), 1);
        let pairing = Pairing::new(&ab);
        let m = extract_products(&w, &pairing, 6).unwrap();
        assert!(!m.m1_is_zero());
        assert_eq!(m.arities().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn degree_law_on_stored_components() {
        let ab = loop_alphabet(4, &[0, -1]);
        let w = lift_potential(
            &series(&ab, "x:0->0:0:1*x:0->0:0:1*x:0->0:-1:2"),
            &ab,
        )
        .unwrap();
        let pairing = Pairing::new(&ab);
        let m = extract_products(&w, &pairing, 6).unwrap();
        let mut seen = 0;
        for n in m.arities().collect::<Vec<_>>() {
            for (ins, combo) in m.tables[&n].iter() {
                let in_deg: i64 = ins.iter().map(|l| BasisVector::new(*l).degree()).sum();
                for u in combo.keys() {
                    assert_eq!(BasisVector::new(*u).degree(), in_deg + 2 - n as i64);
                    seen += 1;
                }
            }
        }
        assert!(seen > 0);
    }

    #[test]
    fn extraction_rejects_inhomogeneous_potentials() {
        let ab = loop_alphabet(3, &[0]);
        let mut w = series(&ab, "x:0->0:0:1*x:0->0:0:1*x:0->0:0:1");
        w.add_word(
            &[
                ab.letter_by_id("x:0->0:0:1").unwrap(),
                ab.letter_by_id("x:0->0:0:1").unwrap(),
                ab.letter_by_id("xi:0->0:-1:1").unwrap(),
            ],
            rat(1),
        )
        .unwrap();
        let pairing = Pairing::new(&ab);
        assert!(matches!(
            extract_products(&w, &pairing, 6),
            Err(AinftyError::NonHomogeneous { .. })
        ));
    }

    #[test]
    fn truncation_drops_long_words() {
        let ab = loop_alphabet(3, &[0]);
        let mut w = build_w_can(&ab);
        let x = ab.letter_by_id("x:0->0:0:1").unwrap();
        w.add_word(&[x; 5], rat(1)).unwrap();
        let pairing = Pairing::new(&ab);
        let m = extract_products(&w, &pairing, 3).unwrap();
        // only words of length <= 4 are read, so the quintic is invisible
        assert_eq!(m.arities().collect::<Vec<_>>(), vec![2]);
    }

    #[test]
    fn export_is_deterministic_and_names_the_pin() {
        let ab = loop_alphabet(3, &[0]);
        let w = lift_potential(&series(&ab, "x:0->0:0:1*x:0->0:0:1*x:0->0:0:1"), &ab).unwrap();
        let pairing = Pairing::new(&ab);
        let m = extract_products(&w, &pairing, 6).unwrap();
        let text = m.to_json();
        assert_eq!(text, m.to_json());
        assert!(text.contains("e[x:0->0:0:1]"));
        assert!(text.contains("e[xi:0->0:-1:1]"));
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(parsed.as_array().is_some_and(|a| !a.is_empty()));
    }

    #[test]
    fn basis_vector_conventions() {
        let z = Letter::x(1, 2, -1, 1);
        let e = BasisVector::new(z);
        assert_eq!(e.degree(), 2);
        assert_eq!(e.endpoints(), (2, 1));
        assert_eq!(e.id(), "e[x:1->2:-1:1]");
        let alpha = BasisVector::new(Letter::alpha(0));
        assert_eq!(alpha.degree(), 0);
        let beta = BasisVector::new(Letter::beta(0, 4));
        assert_eq!(beta.degree(), 4);
    }

    #[test]
    fn empty_products_pass_vacuously() {
        let ab = loop_alphabet(3, &[0]);
        let pairing = Pairing::new(&ab);
        let m = extract_products(&CyclicSeries::zero(), &pairing, 6).unwrap();
        assert!(check_ainfty(&m, 6).pass);
        assert!(m.m1_is_zero());
        assert_eq!(m.arities().count(), 0);
    }
}
