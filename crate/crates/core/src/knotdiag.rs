//! PD codes, Wirtinger presentations and Fox-derivative Alexander matrices.
//!
//! A PD crossing `(a, b, c, d)` lists the four incident edges
//! counterclockwise starting from the incoming under-strand, so the
//! under-strand runs `a → c`. Edges are labelled `1..=2n` consecutively along
//! the knot; the over-strand runs `b → d` when `d` follows `b`, otherwise
//! `d → b`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactla::PolyMatrix;
use crate::polyring::IntPoly;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PDCode {
    crossings: Vec<[u32; 4]>,
}

impl PDCode {
    /// Validates label multiplicities, connectivity and orientation.
    pub fn new(crossings: Vec<[u32; 4]>) -> Result<Self> {
        let n = crossings.len();
        let labels = 2 * n as u32;
        let mut seen: BTreeMap<u32, u32> = BTreeMap::new();
        for x in &crossings {
            for &l in x {
                *seen.entry(l).or_default() += 1;
            }
        }
        let odd: Vec<String> = seen
            .iter()
            .filter(|&(_, &k)| k != 2)
            .map(|(l, k)| format!("{l} (x{k})"))
            .collect();
        if !odd.is_empty() {
            return Err(Error::PdInvalid(format!(
                "every label must appear exactly twice; offending labels: {}",
                odd.join(", ")
            )));
        }
        if let Some((&l, _)) = seen.iter().find(|&(&l, _)| l == 0 || l > labels) {
            return Err(Error::PdInvalid(format!("label {l} is outside 1..={labels}")));
        }
        let components = count_components(&crossings, labels as usize);
        if components > 1 {
            return Err(Error::MultiComponent(components));
        }
        let pd = PDCode { crossings };
        for (ci, x) in pd.crossings.iter().enumerate() {
            if x[2] != pd.next_label(x[0]) {
                return Err(Error::PdInvalid(format!(
                    "crossing {ci} {x:?}: under-strand {} -> {} is not consecutive",
                    x[0], x[2]
                )));
            }
            if x[3] != pd.next_label(x[1]) && x[1] != pd.next_label(x[3]) {
                return Err(Error::PdInvalid(format!(
                    "crossing {ci} {x:?}: over-strand labels {} and {} are not consecutive",
                    x[1], x[3]
                )));
            }
        }
        Ok(pd)
    }

    pub fn unknot() -> Self {
        PDCode { crossings: Vec::new() }
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    fn next_label(&self, l: u32) -> u32 {
        l % (2 * self.crossings.len() as u32) + 1
    }

    /// Sign of crossing `i`: +1 when the over-strand runs `d → b`.
    pub fn crossing_sign(&self, i: usize) -> i8 {
        let [_, b, _, d] = self.crossings[i];
        if b == self.next_label(d) {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for PDCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.crossings.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[{},{},{},{}]", x[0], x[1], x[2], x[3])?;
        }
        write!(f, "]")
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

/// Components of the diagram: strands continue `a–c` and `b–d` through
/// each crossing.
fn count_components(crossings: &[[u32; 4]], labels: usize) -> usize {
    if labels == 0 {
        return 1;
    }
    let mut parent: Vec<usize> = (0..=labels).collect();
    for x in crossings {
        union(&mut parent, x[0] as usize, x[2] as usize);
        union(&mut parent, x[1] as usize, x[3] as usize);
    }
    (1..=labels).filter(|&l| find(&mut parent, l) == l).count()
}

/// Parses `[[a,b,c,d],...]` (brackets or parentheses) or
/// `PD[X(a,b,c,d),...]` / `PD[X[a,b,c,d],...]`; whitespace is ignored.
pub fn parse_pd(text: &str) -> Result<PDCode> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let body = if let Some(rest) = s.strip_prefix("PD[") {
        rest.strip_suffix(']')
            .ok_or_else(|| Error::PdSyntax("missing closing ']' after PD[".into()))?
            .to_string()
    } else {
        let inner = s
            .strip_prefix(['[', '('])
            .and_then(|r| r.strip_suffix([']', ')']))
            .ok_or_else(|| Error::PdSyntax(format!("expected a bracketed list, got {text:?}")))?;
        inner.to_string()
    };
    let mut crossings = Vec::new();
    let mut rest = body.as_str();
    while !rest.is_empty() {
        let r = rest.strip_prefix('X').unwrap_or(rest);
        let close = match r.chars().next() {
            Some('[') => ']',
            Some('(') => ')',
            _ => return Err(Error::PdSyntax(format!("expected a crossing tuple at {rest:?}"))),
        };
        let end = r
            .find(close)
            .ok_or_else(|| Error::PdSyntax(format!("unterminated crossing tuple at {rest:?}")))?;
        let fields: Vec<&str> = r[1..end].split(',').collect();
        if fields.len() != 4 {
            return Err(Error::PdSyntax(format!(
                "crossing {} has {} entries, expected 4: {:?}",
                crossings.len(),
                fields.len(),
                &r[..=end]
            )));
        }
        let mut x = [0u32; 4];
        for (slot, f) in x.iter_mut().zip(&fields) {
            *slot = f
                .parse()
                .map_err(|_| Error::PdSyntax(format!("bad label {f:?} in crossing {}", crossings.len())))?;
        }
        crossings.push(x);
        rest = &r[end + 1..];
        if let Some(after) = rest.strip_prefix(',') {
            if after.is_empty() {
                return Err(Error::PdSyntax("trailing comma".into()));
            }
            rest = after;
        } else if !rest.is_empty() {
            return Err(Error::PdSyntax(format!("expected ',' before {rest:?}")));
        }
    }
    PDCode::new(crossings)
}

/// One Wirtinger relation: at a crossing with over-arc `over`, the
/// under-strand passes from arc `incoming` to arc `outgoing`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Relation {
    pub over: usize,
    pub incoming: usize,
    pub outgoing: usize,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WirtingerData {
    pub generators: usize,
    pub relations: Vec<Relation>,
}

/// Arcs are the classes of edges joined through over-crossings, indexed in
/// order of their smallest edge label.
pub fn wirtinger(pd: &PDCode) -> WirtingerData {
    let labels = 2 * pd.crossing_count();
    let mut parent: Vec<usize> = (0..=labels).collect();
    for x in pd.crossings() {
        union(&mut parent, x[1] as usize, x[3] as usize);
    }
    let mut arc_of = vec![usize::MAX; labels + 1];
    let mut generators = 0;
    for l in 1..=labels {
        let root = find(&mut parent, l);
        if arc_of[root] == usize::MAX {
            arc_of[root] = generators;
            generators += 1;
        }
        arc_of[l] = arc_of[root];
    }
    let relations = pd
        .crossings()
        .iter()
        .enumerate()
        .map(|(i, x)| Relation {
            over: arc_of[x[1] as usize],
            incoming: arc_of[x[0] as usize],
            outgoing: arc_of[x[2] as usize],
            sign: pd.crossing_sign(i),
        })
        .collect();
    WirtingerData { generators, relations }
}

/// Square Alexander matrix with one relation row and one generator column
/// removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlexanderMatrix {
    pub matrix: PolyMatrix,
    pub deleted_row: usize,
    pub deleted_col: usize,
}

/// Full Fox Jacobian: one row per relation, one column per generator.
///
/// A positive crossing gives the relation `x_k = x_j x_i x_j⁻¹`, whose row
/// is `t` at `i`, `1 − t` at `j`, `−1` at `k`; a negative crossing
/// `x_k = x_j⁻¹ x_i x_j` gives, after multiplying by the unit `t`, `1` at
/// `i`, `t − 1` at `j`, `−t` at `k`.
pub fn fox_jacobian(w: &WirtingerData) -> Vec<Vec<IntPoly>> {
    let mut rows = vec![vec![IntPoly::zero(); w.generators]; w.relations.len()];
    for (row, rel) in rows.iter_mut().zip(&w.relations) {
        let (ci, cj, ck): (&[i64], &[i64], &[i64]) = if rel.sign > 0 {
            (&[0, 1], &[1, -1], &[-1])
        } else {
            (&[1], &[-1, 1], &[0, -1])
        };
        for (col, c) in [(rel.incoming, ci), (rel.over, cj), (rel.outgoing, ck)] {
            row[col] = &row[col] + &IntPoly::from_i64s(c);
        }
    }
    rows
}

pub fn alexander_matrix(pd: &PDCode) -> AlexanderMatrix {
    let n = pd.crossing_count();
    if n == 0 {
        return AlexanderMatrix {
            matrix: PolyMatrix::zeros(0),
            deleted_row: 0,
            deleted_col: 0,
        };
    }
    alexander_matrix_deleting(pd, n - 1, n - 1).expect("last row and column exist")
}

/// Alexander matrix with the given relation row and generator column removed.
pub fn alexander_matrix_deleting(pd: &PDCode, row: usize, col: usize) -> Result<AlexanderMatrix> {
    let w = wirtinger(pd);
    if row >= w.relations.len() || col >= w.generators {
        return Err(Error::Shape(format!(
            "cannot delete row {row} / column {col} from a {}x{} Jacobian",
            w.relations.len(),
            w.generators
        )));
    }
    let jac = fox_jacobian(&w);
    let rows: Vec<Vec<IntPoly>> = jac
        .into_iter()
        .enumerate()
        .filter(|&(i, _)| i != row)
        .map(|(_, r)| {
            r.into_iter()
                .enumerate()
                .filter(|&(j, _)| j != col)
                .map(|(_, e)| e)
                .collect()
        })
        .collect();
    Ok(AlexanderMatrix {
        matrix: PolyMatrix::from_rows(rows)?,
        deleted_row: row,
        deleted_col: col,
    })
}
