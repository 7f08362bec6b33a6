use std::fmt::Write as _;

use crate::spec::{BSpecification, StateId};

use super::facets::FacetSpecification;
use super::representation::{Representation, Source};
use super::TableError;

/// Encodes ⊥ in the flat tables.
pub const NONE: u32 = u32::MAX;

/// Compiled lookup tables `N`, `F^p`, `Ω` plus the state functions.
///
/// `N` and `F^p` are indexed by `(j * S + s) * F + f`, `Ω` by
/// `((j * S + s) * S + t) * F + f`, with `F` the maximal facet count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveTables {
    pub name: String,
    pub dimension: usize,
    pub b: u32,
    pub state_count: usize,
    pub facet_count: usize,
    pub labels: Vec<String>,
    pub facets: FacetSpecification,
    pub n: Vec<u32>,
    pub fp: Vec<u32>,
    pub omega: Vec<u32>,
    /// `S^c`, indexed by `s * b + j`.
    pub child_state: Vec<u32>,
    /// `S^p`, indexed by `s * b + j`, when every `σ_j` is a bijection.
    pub parent_state: Option<Vec<u32>>,
    pub palindrome: bool,
}

fn opt(v: u32) -> Option<u32> {
    (v != NONE).then_some(v)
}

impl CurveTables {
    #[inline]
    pub fn n_index(&self, j: u32, s: StateId, f: usize) -> usize {
        (j as usize * self.state_count + s) * self.facet_count + f
    }

    #[inline]
    pub fn omega_index(&self, j: u32, s: StateId, t: StateId, f: usize) -> usize {
        ((j as usize * self.state_count + s) * self.state_count + t) * self.facet_count + f
    }

    #[inline]
    pub fn n(&self, j: u32, s: StateId, f: usize) -> Option<u32> {
        opt(self.n[self.n_index(j, s, f)])
    }

    #[inline]
    pub fn fp(&self, j: u32, s: StateId, f: usize) -> Option<usize> {
        opt(self.fp[self.n_index(j, s, f)]).map(|x| x as usize)
    }

    #[inline]
    pub fn omega(&self, j: u32, s: StateId, t: StateId, f: usize) -> Option<u32> {
        opt(self.omega[self.omega_index(j, s, t, f)])
    }

    #[inline]
    pub fn child(&self, s: StateId, j: u32) -> StateId {
        self.child_state[s * self.b as usize + j as usize] as StateId
    }

    #[inline]
    pub fn parent(&self, s: StateId, j: u32) -> Option<StateId> {
        self.parent_state.as_ref().map(|p| p[s * self.b as usize + j as usize] as StateId)
    }

    pub fn is_invertible(&self) -> bool {
        self.parent_state.is_some()
    }

    pub fn state_by_label(&self, label: &str) -> Option<StateId> {
        self.labels.iter().position(|l| l == label)
    }

    /// Canonical text form. ⊥ is written as `-1`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let e = |v: u32| if v == NONE { "-1".to_string() } else { v.to_string() };
        let row = |xs: &[u32]| xs.iter().map(|&v| e(v)).collect::<Vec<_>>().join(" ");
        let _ = writeln!(out, "curve-tables 1");
        let _ = writeln!(out, "name {}", self.name);
        let _ = writeln!(out, "dimension {}", self.dimension);
        let _ = writeln!(out, "branching {}", self.b);
        let _ = writeln!(out, "states {}", self.state_count);
        let _ = writeln!(out, "facets {}", self.facet_count);
        let _ = writeln!(out, "labels {}", self.labels.join(" "));
        let _ = writeln!(out, "palindrome {}", self.palindrome);
        let _ = writeln!(out, "facet-sets");
        for s in 0..self.state_count {
            let sets: Vec<String> = self.facets.sets[s]
                .iter()
                .map(|f| f.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","))
                .collect();
            let _ = writeln!(out, "{}", sets.join(" "));
        }
        let _ = writeln!(out, "child-state");
        for r in self.child_state.chunks(self.b as usize) {
            let _ = writeln!(out, "{}", row(r));
        }
        match &self.parent_state {
            Some(p) => {
                let _ = writeln!(out, "parent-state");
                for r in p.chunks(self.b as usize) {
                    let _ = writeln!(out, "{}", row(r));
                }
            }
            None => {
                let _ = writeln!(out, "parent-state none");
            }
        }
        for (name, table) in [("N", &self.n), ("Fp", &self.fp), ("Omega", &self.omega)] {
            let _ = writeln!(out, "{name}");
            for r in table.chunks(self.facet_count.max(1)) {
                let _ = writeln!(out, "{}", row(r));
            }
        }
        out
    }

    /// Inverse of [`CurveTables::to_text`].
    pub fn from_text(text: &str) -> Result<Self, TableError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let mut next = |what: &str| -> Result<(usize, &str), TableError> {
            lines
                .next()
                .map(|(i, l)| (i + 1, l.trim()))
                .ok_or_else(|| TableError::Parse { line: 0, detail: format!("missing {what}") })
        };
        let perr = |line: usize, detail: String| TableError::Parse { line, detail };
        let header = |(line, l): (usize, &str), key: &str| -> Result<String, TableError> {
            l.strip_prefix(key).map(|r| r.trim().to_string()).ok_or_else(|| perr(line, format!("expected `{key}`")))
        };
        let num = |line: usize, s: &str| -> Result<usize, TableError> {
            s.parse().map_err(|_| perr(line, format!("bad number `{s}`")))
        };
        let entries = |(line, l): (usize, &str), len: usize| -> Result<Vec<u32>, TableError> {
            let v: Vec<u32> = l
                .split_whitespace()
                .map(|t| match t {
                    "-1" => Ok(NONE),
                    _ => t.parse::<u32>().map_err(|_| perr(line, format!("bad entry `{t}`"))),
                })
                .collect::<Result<_, _>>()?;
            if v.len() != len {
                return Err(perr(line, format!("expected {len} entries, found {}", v.len())));
            }
            Ok(v)
        };

        let (line, magic) = next("header")?;
        if magic != "curve-tables 1" {
            return Err(perr(line, "not a curve-tables file".into()));
        }
        let name = header(next("name")?, "name")?;
        let l = next("dimension")?;
        let dimension = num(l.0, &header(l, "dimension")?)?;
        let l = next("branching")?;
        let b = num(l.0, &header(l, "branching")?)? as u32;
        let l = next("states")?;
        let state_count = num(l.0, &header(l, "states")?)?;
        let l = next("facets")?;
        let facet_count = num(l.0, &header(l, "facets")?)?;
        let labels: Vec<String> = header(next("labels")?, "labels")?.split_whitespace().map(String::from).collect();
        if labels.len() != state_count {
            return Err(perr(0, format!("{} labels for {state_count} states", labels.len())));
        }
        let l = next("palindrome")?;
        let palindrome = match header(l, "palindrome")?.as_str() {
            "true" => true,
            "false" => false,
            other => return Err(perr(l.0, format!("bad flag `{other}`"))),
        };
        header(next("facet-sets")?, "facet-sets")?;
        let mut sets = Vec::with_capacity(state_count);
        for _ in 0..state_count {
            let (line, l) = next("facet set row")?;
            let row: Vec<Vec<usize>> = l
                .split_whitespace()
                .map(|f| f.split(',').map(|i| num(line, i)).collect::<Result<_, _>>())
                .collect::<Result<_, _>>()?;
            if row.len() > facet_count {
                return Err(perr(line, "more facets than declared".into()));
            }
            sets.push(row);
        }
        header(next("child-state")?, "child-state")?;
        let mut child_state = Vec::new();
        for _ in 0..state_count {
            child_state.extend(entries(next("child-state row")?, b as usize)?);
        }
        let l = next("parent-state")?;
        let parent_state = match header(l, "parent-state")?.as_str() {
            "none" => None,
            "" => {
                let mut p = Vec::new();
                for _ in 0..state_count {
                    p.extend(entries(next("parent-state row")?, b as usize)?);
                }
                Some(p)
            }
            other => return Err(perr(l.0, format!("unexpected `{other}`"))),
        };
        let mut read_table = |key: &str, rows: usize| -> Result<Vec<u32>, TableError> {
            header(next(key)?, key)?;
            let mut t = Vec::with_capacity(rows * facet_count);
            for _ in 0..rows {
                t.extend(entries(next(key)?, facet_count)?);
            }
            Ok(t)
        };
        let rows = b as usize * state_count;
        let n = read_table("N", rows)?;
        let fp = read_table("Fp", rows)?;
        let omega = read_table("Omega", rows * state_count)?;
        if let Some((line, _)) = lines.next() {
            return Err(perr(line + 1, "trailing content".into()));
        }
        Ok(CurveTables {
            name,
            dimension,
            b,
            state_count,
            facet_count,
            labels,
            facets: FacetSpecification { sets },
            n,
            fp,
            omega,
            child_state,
            parent_state,
            palindrome,
        })
    }
}

/// True iff every defined `Ω(j, s, t, f)` equals `b - 1 - j`.
pub fn check_palindrome(t: &CurveTables) -> bool {
    let per_j = t.state_count * t.state_count * t.facet_count;
    t.omega
        .chunks(per_j.max(1))
        .enumerate()
        .all(|(j, chunk)| chunk.iter().all(|&v| v == NONE || v == t.b - 1 - j as u32))
}

fn set(table: &mut [u32], idx: usize, v: u32, what: &'static str) -> Result<(), TableError> {
    let slot = &mut table[idx];
    if *slot != NONE && *slot != v {
        return Err(TableError::Conflict { table: what, detail: format!("entry {idx} is both {} and {v}", *slot) });
    }
    *slot = v;
    Ok(())
}

/// Fills `N`, `F^p` and `Ω` from the neighboring children observed while
/// building the representation. Entries never observed stay ⊥.
pub fn compute_tables(
    spec: &BSpecification,
    rep: &Representation,
    facets: &FacetSpecification,
) -> Result<CurveTables, TableError> {
    let b = spec.branching();
    let ns = spec.state_count();
    let nf = facets.max_count();
    let mut t = CurveTables {
        name: spec.name.clone(),
        dimension: spec.dimension,
        b,
        state_count: ns,
        facet_count: nf,
        labels: spec.state_labels.clone(),
        facets: facets.clone(),
        n: vec![NONE; b as usize * ns * nf],
        fp: vec![NONE; b as usize * ns * nf],
        omega: vec![NONE; b as usize * ns * ns * nf],
        child_state: spec.system.child_table().iter().map(|&s| s as u32).collect(),
        parent_state: spec.system.parent_table().map(|p| p.iter().map(|&s| s as u32).collect()),
        palindrome: false,
    };
    for o in &rep.observations {
        match o.source {
            Source::Siblings(s) => {
                let i = t.n_index(o.j, s, o.f);
                set(&mut t.n, i, o.j2, "N")?;
            }
            Source::Pair(s, s2, fp) => {
                let i = t.n_index(o.j, s, o.f);
                set(&mut t.fp, i, fp as u32, "Fp")?;
                let k = t.omega_index(o.j, s, s2, o.f);
                set(&mut t.omega, k, o.j2, "Omega")?;
            }
        }
    }
    t.palindrome = check_palindrome(&t);
    Ok(t)
}
