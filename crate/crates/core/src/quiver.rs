//! Graded quivers, Ext-dimension tables, and the double-quiver construction.
//!
//! A *half* quiver `Q` carries arrows in degrees `⌊(3-d)/2⌋..=0`; its
//! *double* adjoins one dual arrow `a*: j → i` of degree `2-d-r` per arrow
//! `a: i → j` of degree `r`. An [`ExtTable`] records the graded dimensions
//! `dims[i][j][k]` the construction starts from; the translation in both
//! directions is exact bookkeeping and round-trips.
//!
//! Arrow ids are canonical and self-describing: `x:{src}->{tgt}:{deg}:{n}`
//! with `n` a 1-based counter per `(src, tgt, deg)`, and duals prefixed
//! `xi:`. Validation enforces that ids match the arrow data, which keeps
//! serialized quivers, potential text, and in-memory letters in exact
//! correspondence.

use crate::words::{parse_letter_id, Alphabet, Kind, Letter, WordError};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// One arrow of a graded quiver.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Arrow {
    pub id: String,
    pub src: u32,
    pub tgt: u32,
    pub deg: i64,
}

/// A graded quiver at ambient dimension `d ≥ 2`. `half = true` for the
/// generating half `Q`, `false` for the double `Q̄`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GradedQuiver {
    pub d: i64,
    pub vertices: Vec<u32>,
    pub arrows: Vec<Arrow>,
    pub half: bool,
}

/// One violated table invariant, with the offending position.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Violation {
    pub i: u32,
    pub j: u32,
    pub k: i64,
    pub rule: &'static str,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{}): {}", self.i, self.j, self.k, self.rule)
    }
}

/// Outcome of [`validate_ext_table`]: empty ⇔ the table satisfies every
/// hypothesis of the construction.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return f.write_str("valid");
        }
        for (n, v) in self.violations.iter().enumerate() {
            if n > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Error, Debug)]
pub enum QuiverError {
    #[error("invalid Ext table:\n{0}")]
    InvalidExtTable(ValidationReport),
    #[error("expected a half quiver (half = true)")]
    ExpectedHalf,
    #[error("expected a double quiver (half = false)")]
    ExpectedDouble,
    #[error("d = {0} is not supported; the construction needs d >= 2")]
    UnsupportedDimension(i64),
    #[error("forbidden 2-cycle in degree {deg}: `{a}` and `{b}`")]
    ForbiddenTwoCycle { a: String, b: String, deg: i64 },
    #[error("arrow `{id}`: degree {deg} outside [{lo}, 0]")]
    DegreeOutOfRange { id: String, deg: i64, lo: i64 },
    #[error("duplicate arrow id `{0}`")]
    DuplicateArrowId(String),
    #[error("arrow `{id}`: endpoint {v} is not a vertex of the quiver")]
    UnknownVertex { id: String, v: u32 },
    #[error("arrow `{0}`: id does not match the arrow data (expected canonical `{1}`)")]
    NonCanonicalId(String, String),
    #[error("arrow `{0}` has no dual partner in the double")]
    UnpairedArrow(String),
    #[error("dims entry ({i},{j}) has length {got}, expected {expected}")]
    BadDimsLength { i: u32, j: u32, expected: usize, got: usize },
    #[error("malformed dims key `{0}`: expected \"i,j\"")]
    BadDimsKey(String),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Graded Ext dimensions `dims[i][j][k]`, `0 ≤ k ≤ d`, for all ordered
/// vertex pairs. Entries outside the stored range are zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtTable {
    d: i64,
    dims: BTreeMap<(u32, u32), Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
struct ExtTableWire {
    d: i64,
    dims: BTreeMap<String, Vec<u64>>,
}

impl ExtTable {
    /// Build from explicit entries; pairs not listed get all-zero rows over
    /// the vertex set mentioned by the keys. Each row must have `d+1`
    /// entries.
    pub fn new(
        d: i64,
        entries: impl IntoIterator<Item = ((u32, u32), Vec<u64>)>,
    ) -> Result<Self, QuiverError> {
        if d < 0 {
            return Err(QuiverError::UnsupportedDimension(d));
        }
        let expected = (d + 1) as usize;
        let mut dims: BTreeMap<(u32, u32), Vec<u64>> = BTreeMap::new();
        for ((i, j), row) in entries {
            if row.len() != expected {
                return Err(QuiverError::BadDimsLength { i, j, expected, got: row.len() });
            }
            dims.insert((i, j), row);
        }
        let vertices: BTreeSet<u32> =
            dims.keys().flat_map(|&(i, j)| [i, j]).collect();
        for &i in &vertices {
            for &j in &vertices {
                dims.entry((i, j)).or_insert_with(|| vec![0; expected]);
            }
        }
        Ok(ExtTable { d, dims })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn vertices(&self) -> Vec<u32> {
        let set: BTreeSet<u32> = self.dims.keys().flat_map(|&(i, j)| [i, j]).collect();
        set.into_iter().collect()
    }

    /// `dims[i][j][k]`, zero outside the stored range.
    pub fn dim(&self, i: u32, j: u32, k: i64) -> u64 {
        if k < 0 || k > self.d {
            return 0;
        }
        self.dims.get(&(i, j)).map_or(0, |row| row[k as usize])
    }

    pub fn to_json(&self) -> String {
        let wire = ExtTableWire {
            d: self.d,
            dims: self
                .dims
                .iter()
                .map(|(&(i, j), row)| (format!("{i},{j}"), row.clone()))
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&wire).expect("serialization cannot fail");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, QuiverError> {
        let wire: ExtTableWire = serde_json::from_str(text)?;
        let mut entries = Vec::new();
        for (key, row) in wire.dims {
            let (i, j) = key
                .split_once(',')
                .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                .ok_or_else(|| QuiverError::BadDimsKey(key.clone()))?;
            entries.push(((i, j), row));
        }
        ExtTable::new(wire.d, entries)
    }
}

/// For even `d`: the chosen direction of the middle-degree arrows between
/// each unordered pair of distinct vertices. Pairs without an explicit
/// choice default to low-vertex → high-vertex.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct OrientationChoice {
    choices: BTreeMap<(u32, u32), (u32, u32)>,
}

impl OrientationChoice {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declare that middle-degree arrows between `src` and `tgt` run
    /// `src → tgt`.
    pub fn orient(&mut self, src: u32, tgt: u32) {
        let key = (src.min(tgt), src.max(tgt));
        self.choices.insert(key, (src, tgt));
    }

    /// The direction for the unordered pair `{i, j}`.
    pub fn direction(&self, i: u32, j: u32) -> (u32, u32) {
        let key = (i.min(j), i.max(j));
        self.choices.get(&key).copied().unwrap_or(key)
    }
}

/// Check every table-level hypothesis of the construction. Violations are
/// report entries, not errors; an empty report means the table is valid.
pub fn validate_ext_table(table: &ExtTable) -> ValidationReport {
    let mut violations = Vec::new();
    let d = table.d;
    if d < 2 {
        violations.push(Violation { i: 0, j: 0, k: d, rule: "d < 2" });
        return ValidationReport { violations };
    }
    let verts = table.vertices();
    for &i in &verts {
        if table.dim(i, i, 0) != 1 {
            violations.push(Violation { i, j: i, k: 0, rule: "Ext^0 identity" });
        }
        for &j in &verts {
            if i != j && table.dim(i, j, 0) != 0 {
                violations.push(Violation { i, j, k: 0, rule: "Ext^0 off-diagonal" });
            }
            for k in 0..=d {
                // report each CY-symmetry failure once, at its lexicographically
                // first incarnation
                if table.dim(i, j, k) != table.dim(j, i, d - k)
                    && (i, j, k) <= (j, i, d - k)
                {
                    violations.push(Violation { i, j, k, rule: "CY symmetry" });
                }
            }
        }
        if d % 2 == 0 {
            let mid = table.dim(i, i, d / 2);
            if !mid.is_multiple_of(2) {
                violations.push(Violation { i, j: i, k: d / 2, rule: "middle dimension odd" });
            } else if mid > 2 {
                // two or more middle loops at one vertex always form a
                // 2-cycle in degree (2-d)/2, so no admissible half exists
                violations.push(Violation {
                    i,
                    j: i,
                    k: d / 2,
                    rule: "middle dimension exceeds 2: no 2-cycle-free half quiver exists",
                });
            }
        }
    }
    ValidationReport { violations }
}

/// Lowest arrow degree of a half quiver at dimension `d`.
pub fn half_degree_floor(d: i64) -> i64 {
    (3 - d).div_euclid(2)
}

/// Build the generating half `Q` from a valid Ext table: arrows `i → j` of
/// degree `r` with multiplicity `dims[i][j][1-r]`, and for even `d` the
/// middle degree `(2-d)/2` carries `dims[i][i][d/2]/2` loops per vertex
/// plus `dims[i][j][d/2]` arrows per distinct pair in the direction fixed
/// by `orient`.
pub fn quiver_from_ext_table(
    table: &ExtTable,
    orient: &OrientationChoice,
) -> Result<GradedQuiver, QuiverError> {
    let report = validate_ext_table(table);
    if !report.is_valid() {
        return Err(QuiverError::InvalidExtTable(report));
    }
    let d = table.d;
    let verts = table.vertices();
    let mut arrows = Vec::new();
    let push = |src: u32, tgt: u32, deg: i64, count: u64, arrows: &mut Vec<Arrow>| {
        for n in 1..=count {
            arrows.push(Arrow {
                id: Letter::x(src, tgt, deg, n as u32).id(),
                src,
                tgt,
                deg,
            });
        }
    };
    let lo = if d % 2 == 1 { (3 - d) / 2 } else { (4 - d) / 2 };
    for &i in &verts {
        for &j in &verts {
            for r in lo..=0 {
                push(i, j, r, table.dim(i, j, 1 - r), &mut arrows);
            }
        }
    }
    if d % 2 == 0 {
        let mid = (2 - d) / 2;
        for &i in &verts {
            push(i, i, mid, table.dim(i, i, d / 2) / 2, &mut arrows);
        }
        for (a, &i) in verts.iter().enumerate() {
            for &j in verts.iter().skip(a + 1) {
                let count = table.dim(i, j, d / 2);
                if count > 0 {
                    let (src, tgt) = orient.direction(i, j);
                    push(src, tgt, mid, count, &mut arrows);
                }
            }
        }
    }
    Ok(GradedQuiver { d, vertices: verts, arrows, half: true })
}

impl GradedQuiver {
    /// Check all structural invariants for this quiver's `half` flag.
    pub fn validate(&self) -> Result<(), QuiverError> {
        if self.d < 2 {
            return Err(QuiverError::UnsupportedDimension(self.d));
        }
        let verts: BTreeSet<u32> = self.vertices.iter().copied().collect();
        let mut seen = BTreeSet::new();
        for a in &self.arrows {
            if !seen.insert(a.id.clone()) {
                return Err(QuiverError::DuplicateArrowId(a.id.clone()));
            }
            for v in [a.src, a.tgt] {
                if !verts.contains(&v) {
                    return Err(QuiverError::UnknownVertex { id: a.id.clone(), v });
                }
            }
            let letter = self.arrow_letter(a)?;
            if self.half && letter.kind != Kind::X {
                return Err(QuiverError::NonCanonicalId(
                    a.id.clone(),
                    Letter::x(a.src, a.tgt, a.deg, letter.idx).id(),
                ));
            }
            if self.half {
                let lo = half_degree_floor(self.d);
                if a.deg < lo || a.deg > 0 {
                    return Err(QuiverError::DegreeOutOfRange { id: a.id.clone(), deg: a.deg, lo });
                }
            }
        }
        if self.half && self.d % 2 == 0 {
            self.check_two_cycles()?;
        }
        if !self.half {
            self.check_dual_pairing()?;
        }
        Ok(())
    }

    /// The letter an arrow denotes; errors when the id is not canonical for
    /// the arrow's data.
    fn arrow_letter(&self, a: &Arrow) -> Result<Letter, QuiverError> {
        let parsed = parse_letter_id(&a.id, self.d)
            .filter(|(_, n)| *n == a.id.len())
            .map(|(l, _)| l);
        match parsed {
            Some(l)
                if l.src == a.src
                    && l.tgt == a.tgt
                    && l.deg == a.deg
                    && matches!(l.kind, Kind::X | Kind::Xi) =>
            {
                Ok(l)
            }
            _ => Err(QuiverError::NonCanonicalId(
                a.id.clone(),
                Letter::x(a.src, a.tgt, a.deg, 1).id(),
            )),
        }
    }

    /// Forbidden for a half quiver at even d: two distinct arrows of middle
    /// degree running `i → j` and `j → i` (loops at one vertex included).
    fn check_two_cycles(&self) -> Result<(), QuiverError> {
        let mid = (2 - self.d) / 2;
        let middles: Vec<&Arrow> = self.arrows.iter().filter(|a| a.deg == mid).collect();
        for (n, a) in middles.iter().enumerate() {
            for b in middles.iter().skip(n + 1) {
                if a.src == b.tgt && a.tgt == b.src {
                    return Err(QuiverError::ForbiddenTwoCycle {
                        a: a.id.clone(),
                        b: b.id.clone(),
                        deg: mid,
                    });
                }
            }
        }
        Ok(())
    }

    /// Doubles must decompose into dual pairs `(a, a*)`.
    fn check_dual_pairing(&self) -> Result<(), QuiverError> {
        let mut xs = BTreeSet::new();
        let mut xis = BTreeSet::new();
        for a in &self.arrows {
            let l = self.arrow_letter(a)?;
            match l.kind {
                Kind::X => xs.insert(l),
                Kind::Xi => xis.insert(l),
                _ => unreachable!("arrow_letter only returns x/xi"),
            };
        }
        for x in &xs {
            let partner = Letter::xi(x.tgt, x.src, 2 - self.d - x.deg, x.idx);
            if !xis.remove(&partner) {
                return Err(QuiverError::UnpairedArrow(x.id()));
            }
        }
        if let Some(orphan) = xis.iter().next() {
            return Err(QuiverError::UnpairedArrow(orphan.id()));
        }
        Ok(())
    }

    /// The coordinate alphabet of a double quiver (arrows plus `alpha`,
    /// `beta` at every vertex).
    pub fn alphabet(&self) -> Result<Alphabet, QuiverError> {
        if self.half {
            return Err(QuiverError::ExpectedHalf);
        }
        let mut letters = Vec::new();
        for a in &self.arrows {
            letters.push(self.arrow_letter(a)?);
        }
        Ok(Alphabet::new_with_vertices(self.d, letters, self.vertices.iter().copied())?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serialization cannot fail");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, QuiverError> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Adjoin dual arrows: `a*: j → i` of degree `2-d-r` for each `a: i → j` of
/// degree `r`. Dual pairs created here are exempt from the 2-cycle rule,
/// which constrains the generating half only.
pub fn double_quiver(q: &GradedQuiver) -> Result<GradedQuiver, QuiverError> {
    if !q.half {
        return Err(QuiverError::ExpectedHalf);
    }
    q.validate()?;
    let mut arrows = q.arrows.clone();
    for a in &q.arrows {
        let l = q.arrow_letter(a)?;
        let dual = Letter::xi(a.tgt, a.src, 2 - q.d - a.deg, l.idx);
        arrows.push(Arrow { id: dual.id(), src: dual.src, tgt: dual.tgt, deg: dual.deg });
    }
    Ok(GradedQuiver { d: q.d, vertices: q.vertices.clone(), arrows, half: false })
}

/// Recover the Ext table a double quiver encodes: `dims[i][j][k]` counts
/// arrows `i → j` of degree `1-k` for `0 < k < d`, and the boundary entries
/// record the identity classes.
pub fn ext_table_from_quiver(qbar: &GradedQuiver) -> Result<ExtTable, QuiverError> {
    if qbar.half {
        return Err(QuiverError::ExpectedDouble);
    }
    let d = qbar.d;
    if d < 2 {
        return Err(QuiverError::UnsupportedDimension(d));
    }
    let mut entries: BTreeMap<(u32, u32), Vec<u64>> = BTreeMap::new();
    for &i in &qbar.vertices {
        for &j in &qbar.vertices {
            let mut row = vec![0u64; (d + 1) as usize];
            if i == j {
                row[0] = 1;
                row[d as usize] = 1;
            }
            entries.insert((i, j), row);
        }
    }
    for a in &qbar.arrows {
        let k = 1 - a.deg;
        if k >= 1 && k < d {
            if let Some(row) = entries.get_mut(&(a.src, a.tgt)) {
                row[k as usize] += 1;
            }
        }
    }
    ExtTable::new(d, entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_vertex_table(d: i64, row: Vec<u64>) -> ExtTable {
        ExtTable::new(d, [((0u32, 0u32), row)]).unwrap()
    }

    #[test]
    fn valid_table_passes() {
        let t = one_vertex_table(3, vec![1, 2, 2, 1]);
        assert!(validate_ext_table(&t).is_valid());
    }

    #[test]
    fn odd_middle_dimension_flagged() {
        let t = one_vertex_table(4, vec![1, 0, 3, 0, 1]);
        let report = validate_ext_table(&t);
        assert!(report.violations.iter().any(|v| v.rule == "middle dimension odd"));
    }

    #[test]
    fn cy_symmetry_violation_flagged() {
        let t = ExtTable::new(
            3,
            [
                ((0u32, 0u32), vec![1, 0, 0, 1]),
                ((1, 1), vec![1, 0, 0, 1]),
                ((0, 1), vec![0, 2, 0, 0]),
                ((1, 0), vec![0, 0, 1, 0]),
            ],
        )
        .unwrap();
        let report = validate_ext_table(&t);
        assert!(report.violations.iter().any(|v| v.rule == "CY symmetry"));
    }

    #[test]
    fn ext0_rules_flagged() {
        let t = ExtTable::new(
            3,
            [((0u32, 0u32), vec![0, 0, 0, 1]), ((1, 1), vec![1, 0, 0, 1]), ((0, 1), vec![1, 0, 0, 0]), ((1, 0), vec![0, 0, 0, 1])],
        )
        .unwrap();
        let report = validate_ext_table(&t);
        assert!(report.violations.iter().any(|v| v.rule == "Ext^0 identity"));
        assert!(report.violations.iter().any(|v| v.rule == "Ext^0 off-diagonal"));
    }

    #[test]
    fn too_many_middle_loops_rejected() {
        // four middle classes at one vertex would need two loops of middle
        // degree, which always form a forbidden 2-cycle
        let t = one_vertex_table(2, vec![1, 4, 1]);
        let report = validate_ext_table(&t);
        assert!(!report.is_valid());
    }

    #[test]
    fn d3_two_loops_from_table() {
        let t = one_vertex_table(3, vec![1, 2, 2, 1]);
        let q = quiver_from_ext_table(&t, &OrientationChoice::new()).unwrap();
        assert_eq!(q.arrows.len(), 2);
        assert!(q.arrows.iter().all(|a| a.deg == 0 && a.src == 0 && a.tgt == 0));
        assert_eq!(q.arrows[0].id, "x:0->0:0:1");
        assert_eq!(q.arrows[1].id, "x:0->0:0:2");
    }

    #[test]
    fn d4_middle_loop_from_table() {
        let t = one_vertex_table(4, vec![1, 1, 2, 1, 1]);
        let q = quiver_from_ext_table(&t, &OrientationChoice::new()).unwrap();
        let degs: Vec<i64> = q.arrows.iter().map(|a| a.deg).collect();
        assert_eq!(degs, vec![0, -1]);
    }

    #[test]
    fn d2_middle_only() {
        let t = one_vertex_table(2, vec![1, 2, 1]);
        let q = quiver_from_ext_table(&t, &OrientationChoice::new()).unwrap();
        assert_eq!(q.arrows.len(), 1);
        assert_eq!(q.arrows[0].deg, 0);
    }

    #[test]
    fn double_of_d3_loop() {
        let t = one_vertex_table(3, vec![1, 1, 1, 1]);
        let q = quiver_from_ext_table(&t, &OrientationChoice::new()).unwrap();
        let qbar = double_quiver(&q).unwrap();
        let mut degs: Vec<i64> = qbar.arrows.iter().map(|a| a.deg).collect();
        degs.sort();
        assert_eq!(degs, vec![-1, 0]);
        assert!(qbar.arrows.iter().any(|a| a.id == "xi:0->0:-1:1"));
        qbar.validate().unwrap();
    }

    #[test]
    fn double_degrees_at_d5() {
        let q = GradedQuiver {
            d: 5,
            vertices: vec![0],
            arrows: vec![
                Arrow { id: "x:0->0:0:1".into(), src: 0, tgt: 0, deg: 0 },
                Arrow { id: "x:0->0:-1:1".into(), src: 0, tgt: 0, deg: -1 },
            ],
            half: true,
        };
        let qbar = double_quiver(&q).unwrap();
        let mut degs: Vec<i64> = qbar.arrows.iter().map(|a| a.deg).collect();
        degs.sort();
        assert_eq!(degs, vec![-3, -2, -1, 0]);
    }

    #[test]
    fn forbidden_two_cycle_detected() {
        let q = GradedQuiver {
            d: 4,
            vertices: vec![1, 2],
            arrows: vec![
                Arrow { id: "x:1->2:-1:1".into(), src: 1, tgt: 2, deg: -1 },
                Arrow { id: "x:2->1:-1:1".into(), src: 2, tgt: 1, deg: -1 },
            ],
            half: true,
        };
        match double_quiver(&q) {
            Err(QuiverError::ForbiddenTwoCycle { deg, .. }) => assert_eq!(deg, -1),
            other => panic!("expected forbidden 2-cycle, got {other:?}"),
        }
    }

    #[test]
    fn two_middle_loops_at_one_vertex_are_a_two_cycle() {
        let q = GradedQuiver {
            d: 2,
            vertices: vec![0],
            arrows: vec![
                Arrow { id: "x:0->0:0:1".into(), src: 0, tgt: 0, deg: 0 },
                Arrow { id: "x:0->0:0:2".into(), src: 0, tgt: 0, deg: 0 },
            ],
            half: true,
        };
        assert!(matches!(q.validate(), Err(QuiverError::ForbiddenTwoCycle { .. })));
    }

    #[test]
    fn ext_table_from_double_examples() {
        let t = one_vertex_table(3, vec![1, 1, 1, 1]);
        let qbar =
            double_quiver(&quiver_from_ext_table(&t, &OrientationChoice::new()).unwrap()).unwrap();
        let back = ext_table_from_quiver(&qbar).unwrap();
        assert_eq!(back, t);

        let empty = GradedQuiver { d: 3, vertices: vec![0], arrows: vec![], half: false };
        let table = ext_table_from_quiver(&empty).unwrap();
        assert_eq!(table.dim(0, 0, 0), 1);
        assert_eq!(table.dim(0, 0, 1), 0);
        assert_eq!(table.dim(0, 0, 2), 0);
        assert_eq!(table.dim(0, 0, 3), 1);

        let t4 = one_vertex_table(4, vec![1, 1, 2, 1, 1]);
        let qbar4 =
            double_quiver(&quiver_from_ext_table(&t4, &OrientationChoice::new()).unwrap()).unwrap();
        assert_eq!(ext_table_from_quiver(&qbar4).unwrap(), t4);
    }

    #[test]
    fn round_trip_multi_vertex_tables() {
        for d in 2..=6i64 {
            // a two-vertex table with off-diagonal classes spread over the
            // valid degree band, CY-symmetrized by construction
            let mut entries: BTreeMap<(u32, u32), Vec<u64>> = BTreeMap::new();
            let len = (d + 1) as usize;
            let mut diag = vec![0u64; len];
            diag[0] = 1;
            diag[d as usize] = 1;
            if d > 1 {
                diag[1] = 2;
                diag[(d - 1) as usize] = 2;
            }
            if d % 2 == 0 {
                diag[(d / 2) as usize] = 2;
            }
            let mut off = vec![0u64; len];
            if d > 2 {
                off[1] = 1;
            }
            let mut off_t = vec![0u64; len];
            if d > 2 {
                off_t[(d - 1) as usize] = 1;
            }
            if d % 2 == 0 && d > 2 {
                off[(d / 2) as usize] = 3;
                off_t[(d / 2) as usize] = 3;
            }
            entries.insert((0, 0), diag.clone());
            entries.insert((1, 1), diag);
            entries.insert((0, 1), off);
            entries.insert((1, 0), off_t);
            let t = ExtTable::new(d, entries).unwrap();
            assert!(validate_ext_table(&t).is_valid(), "d={d}");
            let q = quiver_from_ext_table(&t, &OrientationChoice::new()).unwrap();
            let qbar = double_quiver(&q).unwrap();
            assert_eq!(ext_table_from_quiver(&qbar).unwrap(), t, "round trip at d={d}");

            // degree multiset symmetric under r -> 2-d-r with endpoints
            // reversed
            let mut fwd: Vec<(u32, u32, i64)> =
                qbar.arrows.iter().map(|a| (a.src, a.tgt, a.deg)).collect();
            let mut rev: Vec<(u32, u32, i64)> =
                qbar.arrows.iter().map(|a| (a.tgt, a.src, 2 - d - a.deg)).collect();
            fwd.sort();
            rev.sort();
            assert_eq!(fwd, rev, "dual symmetry at d={d}");
        }
    }

    #[test]
    fn orientation_does_not_change_ext_table() {
        let t = ExtTable::new(
            4,
            [
                ((0u32, 0u32), vec![1, 0, 0, 0, 1]),
                ((1, 1), vec![1, 0, 0, 0, 1]),
                ((0, 1), vec![0, 0, 2, 0, 0]),
                ((1, 0), vec![0, 0, 2, 0, 0]),
            ],
        )
        .unwrap();
        let mut o1 = OrientationChoice::new();
        o1.orient(0, 1);
        let mut o2 = OrientationChoice::new();
        o2.orient(1, 0);
        let t1 = ext_table_from_quiver(
            &double_quiver(&quiver_from_ext_table(&t, &o1).unwrap()).unwrap(),
        )
        .unwrap();
        let t2 = ext_table_from_quiver(
            &double_quiver(&quiver_from_ext_table(&t, &o2).unwrap()).unwrap(),
        )
        .unwrap();
        assert_eq!(t1, t);
        assert_eq!(t2, t);
    }

    #[test]
    fn json_round_trips() {
        let t = one_vertex_table(3, vec![1, 2, 2, 1]);
        let back = ExtTable::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);

        let q = quiver_from_ext_table(&t, &OrientationChoice::new()).unwrap();
        let qj = q.to_json();
        assert_eq!(GradedQuiver::from_json(&qj).unwrap(), q);
        assert_eq!(GradedQuiver::from_json(&qj).unwrap().to_json(), qj);
        assert!(qj.contains("\"half\": true"));
        assert!(qj.contains("\"vertices\""));
    }

    #[test]
    fn alphabet_from_double_contains_greeks_and_duals() {
        let t = one_vertex_table(3, vec![1, 1, 1, 1]);
        let qbar =
            double_quiver(&quiver_from_ext_table(&t, &OrientationChoice::new()).unwrap()).unwrap();
        let ab = qbar.alphabet().unwrap();
        let x = ab.letter_by_id("x:0->0:0:1").unwrap();
        let xi = ab.letter_by_id("xi:0->0:-1:1").unwrap();
        assert_eq!(ab.dual(&x), Some(xi));
        assert!(ab.letter_by_id("alpha_0").is_some());
        assert!(ab.letter_by_id("beta_0").is_some());
        assert_eq!(ab.letters().len(), 4);
    }

    #[test]
    fn isolated_vertices_still_get_greek_coordinates() {
        let q = GradedQuiver { d: 3, vertices: vec![0, 7], arrows: vec![], half: false };
        let ab = q.alphabet().unwrap();
        assert!(ab.letter_by_id("alpha_7").is_some());
        assert!(ab.letter_by_id("beta_7").is_some());
    }
}
