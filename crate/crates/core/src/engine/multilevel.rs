use crate::spec::StateId;
use crate::tables::{CurveTables, NONE};
use crate::tree::{AlgebraicNode, Position};

use super::{check_facet, EngineError};

/// Upper bound on the number of entries of the widened `Ω` table.
pub const MULTILEVEL_BUDGET: usize = 1 << 26;

/// Tables handling `K` levels per lookup, keyed by the state of the block's
/// top node. `N̂ = F̂p = ⊥` together means the search fails inside the block.
#[derive(Clone, Debug)]
pub struct MultiLevelTables {
    pub base: CurveTables,
    pub depth: u32,
    /// `b^K`.
    pub width: u32,
    pub n: Vec<u32>,
    pub fp: Vec<u32>,
    pub omega: Vec<u32>,
    /// `Ŝ^c(s, ĵ)`, indexed by `s * b^K + ĵ`.
    pub child_state: Vec<u32>,
    /// `Ŝ^p(s, ĵ)`, the state `K` levels up.
    pub parent_state: Vec<u32>,
}

impl MultiLevelTables {
    pub fn build(base: &CurveTables, depth: u32) -> Result<Self, EngineError> {
        if depth == 0 {
            return Err(EngineError::Resource("depth must be at least 1".into()));
        }
        if !base.is_invertible() {
            return Err(EngineError::NotInvertible);
        }
        let (b, ns, nf) = (base.b as usize, base.state_count, base.facet_count);
        let width = b
            .checked_pow(depth)
            .filter(|w| w.saturating_mul(ns * ns * nf) <= MULTILEVEL_BUDGET)
            .ok_or_else(|| EngineError::Resource(format!("depth {depth} exceeds the table budget")))?;
        let k = depth as usize;
        let mut n = vec![NONE; width * ns * nf];
        let mut fp = vec![NONE; width * ns * nf];
        let mut omega = vec![NONE; width * ns * ns * nf];
        let mut child_state = vec![0u32; ns * width];
        let mut parent_state = vec![0u32; ns * width];

        let mut digits = vec![0u32; k];
        // path[i] = state of the block node at depth i
        let mut path = vec![0usize; k + 1];
        for jh in 0..width {
            let mut r = jh;
            for i in (0..k).rev() {
                digits[i] = (r % b) as u32;
                r /= b;
            }
            for s in 0..ns {
                path[0] = s;
                for i in 0..k {
                    path[i + 1] = base.child(path[i], digits[i]);
                }
                child_state[s * width + jh] = path[k] as u32;
                parent_state[path[k] * width + jh] = s as u32;
                for f in 0..nf {
                    let idx = (jh * ns + s) * nf + f;
                    // ascend inside the block, recording facets
                    let mut facet = vec![0usize; k + 1];
                    facet[k] = f;
                    let mut found = None;
                    let mut failed = false;
                    for i in (1..=k).rev() {
                        let (j, sp) = (digits[i - 1], path[i - 1]);
                        if let Some(jw) = base.n(j, sp, facet[i]) {
                            found = Some((i, jw));
                            break;
                        }
                        match base.fp(j, sp, facet[i]) {
                            Some(x) => facet[i - 1] = x,
                            None => {
                                failed = true;
                                break;
                            }
                        }
                    }
                    if failed {
                        continue;
                    }
                    let descend = |from: usize, mut ws: StateId, mut pos: usize| -> Option<usize> {
                        for i in from + 1..=k {
                            let jw = base.omega(digits[i - 1], path[i - 1], ws, facet[i])?;
                            pos = pos * b + jw as usize;
                            ws = base.child(ws, jw);
                        }
                        Some(pos)
                    };
                    match found {
                        Some((i, jw)) => {
                            let prefix = digits[..i - 1].iter().fold(0usize, |p, &d| p * b + d as usize);
                            let ws = base.child(path[i - 1], jw);
                            if let Some(pos) = descend(i, ws, prefix * b + jw as usize) {
                                n[idx] = pos as u32;
                            }
                        }
                        None => {
                            fp[idx] = facet[0] as u32;
                            for t in 0..ns {
                                if let Some(pos) = descend(0, t, 0) {
                                    omega[((jh * ns + s) * ns + t) * nf + f] = pos as u32;
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(MultiLevelTables { base: base.clone(), depth, width: width as u32, n, fp, omega, child_state, parent_state })
    }

    #[inline]
    fn get(table: &[u32], i: usize) -> Option<u32> {
        let v = table[i];
        (v != NONE).then_some(v)
    }

    /// `N̂(ĵ, s, f)` with `s` the state of the block's top node.
    pub fn n_hat(&self, jh: u32, s: StateId, f: usize) -> Option<u32> {
        let ns = self.base.state_count;
        Self::get(&self.n, (jh as usize * ns + s) * self.base.facet_count + f)
    }

    pub fn fp_hat(&self, jh: u32, s: StateId, f: usize) -> Option<usize> {
        let ns = self.base.state_count;
        Self::get(&self.fp, (jh as usize * ns + s) * self.base.facet_count + f).map(|x| x as usize)
    }

    pub fn omega_hat(&self, jh: u32, s: StateId, t: StateId, f: usize) -> Option<u32> {
        let ns = self.base.state_count;
        Self::get(&self.omega, ((jh as usize * ns + s) * ns + t) * self.base.facet_count + f)
    }

    pub fn child_hat(&self, s: StateId, jh: u32) -> StateId {
        self.child_state[s * self.width as usize + jh as usize] as StateId
    }

    pub fn parent_hat(&self, s: StateId, jh: u32) -> StateId {
        self.parent_state[s * self.width as usize + jh as usize] as StateId
    }

    /// Canonical text of the widened tables (base tables first).
    pub fn to_text(&self) -> String {
        let mut out = self.base.to_text();
        let e = |v: &u32| if *v == NONE { "-1".to_string() } else { v.to_string() };
        let nf = self.base.facet_count.max(1);
        out.push_str(&format!("multilevel {}\nwidth {}\n", self.depth, self.width));
        for (name, table, chunk) in [
            ("child-state-hat", &self.child_state, self.width as usize),
            ("parent-state-hat", &self.parent_state, self.width as usize),
            ("N-hat", &self.n, nf),
            ("Fp-hat", &self.fp, nf),
            ("Omega-hat", &self.omega, nf),
        ] {
            out.push_str(name);
            out.push('\n');
            for r in table.chunks(chunk) {
                out.push_str(&r.iter().map(e).collect::<Vec<_>>().join(" "));
                out.push('\n');
            }
        }
        out
    }
}

fn single_step<P: Position>(m: &MultiLevelTables, v: &AlgebraicNode<P>, f: usize) -> Option<AlgebraicNode<P>> {
    let t = &m.base;
    let (q, jv) = v.position.div_rem_small(t.b);
    let sp = t.parent(v.state, jv).expect("invertible");
    let parent = AlgebraicNode { level: v.level - 1, position: q, state: sp };
    let (pw, jw) = match t.n(jv, sp, f) {
        Some(jw) => (parent, jw),
        None => {
            let pw = ml_rec(m, &parent, t.fp(jv, sp, f)?)?;
            let jw = t.omega(jv, sp, pw.state, f)?;
            (pw, jw)
        }
    };
    Some(AlgebraicNode {
        level: v.level,
        position: pw.position.mul_add_small(t.b, jw).expect("same level"),
        state: t.child(pw.state, jw),
    })
}

fn ml_rec<P: Position>(m: &MultiLevelTables, v: &AlgebraicNode<P>, f: usize) -> Option<AlgebraicNode<P>> {
    if v.level == 0 {
        return None;
    }
    if v.level < m.depth {
        return single_step(m, v, f);
    }
    let (top, jh) = v.position.div_rem_small(m.width);
    let st = m.parent_hat(v.state, jh);
    let top_node = AlgebraicNode { level: v.level - m.depth, position: top, state: st };
    let (pw, jw) = match m.n_hat(jh, st, f) {
        Some(jw) => (top_node, jw),
        None => {
            let pw = ml_rec(m, &top_node, m.fp_hat(jh, st, f)?)?;
            let jw = m.omega_hat(jh, st, pw.state, f)?;
            (pw, jw)
        }
    };
    Some(AlgebraicNode {
        level: v.level,
        position: pw.position.mul_add_small(m.width, jw).expect("same level"),
        state: m.child_hat(pw.state, jw),
    })
}

/// Neighbor search taking `K` levels per step; levels below `K` use the base tables.
pub fn neighbor_multilevel<P: Position>(
    m: &MultiLevelTables,
    v: &AlgebraicNode<P>,
    f: usize,
) -> Result<Option<AlgebraicNode<P>>, EngineError> {
    check_facet(&m.base, v.state, f)?;
    Ok(ml_rec(m, v, f))
}
