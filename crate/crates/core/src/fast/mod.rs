//! Curve-specific kernels: Morton by dilated arithmetic, 2D Hilbert with XOR
//! states, palindrome curves (Peano) by digit arithmetic, and 2D Sierpinski
//! by bit flips.

use crate::engine::EngineError;
use crate::tables::CurveTables;
use crate::tree::TreeError;

const NIL: u8 = u8::MAX;

fn out_of_range(level: u32, position: impl ToString) -> EngineError {
    EngineError::Tree(TreeError::OutOfRange { level, position: position.to_string() })
}

/// Largest Morton level for dimension `d` on 64-bit positions.
pub fn morton_max_level(d: u32) -> u32 {
    63 / d
}

/// Neighbor in the Morton order through facet `f` (axis `f / 2`, positive
/// direction for odd `f`); coordinate bit `i` of axis `a` sits at bit `a + d * i`.
pub fn morton_neighbor(d: u32, level: u32, j: u64, f: usize) -> Result<Option<u64>, EngineError> {
    if !(1..=3).contains(&d) || level > morton_max_level(d) {
        return Err(EngineError::Tree(TreeError::Capacity { level }));
    }
    if f >= 2 * d as usize {
        return Err(EngineError::FacetOutOfRange { f, count: 2 * d as usize });
    }
    let bits = d * level;
    let all = if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
    if j & !all != 0 {
        return Err(out_of_range(level, j));
    }
    Ok(morton_step(d, all, j, f))
}

#[inline]
fn axis_mask(d: u32, all: u64, axis: u32) -> u64 {
    let pattern = match d {
        1 => u64::MAX,
        2 => 0x5555_5555_5555_5555,
        _ => 0x9249_2492_4924_9249,
    };
    (pattern << axis) & all
}

#[inline]
fn morton_step(d: u32, all: u64, j: u64, f: usize) -> Option<u64> {
    let axis = (f / 2) as u32;
    let mask = axis_mask(d, all, axis);
    let x = j & mask;
    let rest = j & !mask;
    let x2 = if f % 2 == 1 {
        if x == mask {
            return None;
        }
        (x | !mask).wrapping_add(1 << axis) & mask
    } else {
        if x == 0 {
            return None;
        }
        x.wrapping_sub(1 << axis) & mask
    };
    Some(rest | x2)
}

/// State of `(l, j)` in the global 2D Hilbert model from digit counts:
/// `2 (n_3 mod 2) + (n_0 mod 2)` with `n_i` the number of base-4 digits equal to `i`.
/// Codes: H = 0, A = 1, B = 2, R = 3.
#[inline]
pub fn hilbert2d_state_bits(level: u32, j: u64) -> u32 {
    let digits = if level >= 32 { u64::MAX } else { (1u64 << (2 * level)) - 1 };
    let low = j & 0x5555_5555_5555_5555;
    let high = (j >> 1) & 0x5555_5555_5555_5555;
    let threes = (low & high).count_ones();
    let zeros = (!(low | high) & 0x5555_5555_5555_5555 & digits).count_ones();
    2 * (threes & 1) + (zeros & 1)
}

/// Checked form of [`hilbert2d_state_bits`].
pub fn hilbert2d_state_fast(level: u32, j: u64) -> Result<u32, EngineError> {
    if level > 32 {
        return Err(EngineError::Tree(TreeError::Capacity { level }));
    }
    if level < 32 && j >> (2 * level) != 0 {
        return Err(out_of_range(level, j));
    }
    Ok(hilbert2d_state_bits(level, j))
}

/// `G(j)`: the XOR code with `S^c(s, j) = s ^ G(j)`.
pub const HILBERT2D_G: [u8; 4] = [1, 0, 0, 2];

/// 2D Hilbert neighbors with states as XOR codes; `N` and `Ω` are copied
/// from compiled tables and `F^p` is the identity.
#[derive(Clone, Debug)]
pub struct Hilbert2dKernel {
    n: [u8; 64],
    omega: [u8; 256],
}

impl Hilbert2dKernel {
    pub fn new(t: &CurveTables) -> Result<Self, EngineError> {
        let mismatch = |m: &str| Err(EngineError::KernelMismatch(m.into()));
        if t.b != 4 || t.state_count != 4 || t.facet_count != 4 {
            return mismatch("expected b = 4, four states, four facets");
        }
        for s in 0..4 {
            for j in 0..4u32 {
                if t.child(s, j) != s ^ HILBERT2D_G[j as usize] as usize {
                    return mismatch("child states are not an XOR group with the Hilbert codes");
                }
            }
        }
        let mut n = [NIL; 64];
        let mut omega = [NIL; 256];
        for j in 0..4u32 {
            for s in 0..4 {
                for f in 0..4 {
                    if let Some(x) = t.n(j, s, f) {
                        n[(j as usize * 4 + s) * 4 + f] = x as u8;
                    }
                    if t.fp(j, s, f).is_some_and(|p| p != f) {
                        return mismatch("parent facets differ from the query facet");
                    }
                    for w in 0..4 {
                        if let Some(x) = t.omega(j, s, w, f) {
                            omega[((j as usize * 4 + s) * 4 + w) * 4 + f] = x as u8;
                        }
                    }
                }
            }
        }
        Ok(Hilbert2dKernel { n, omega })
    }

    /// Neighbor `(position, state)` of `(l, j, s)` through `f`.
    #[inline]
    pub fn neighbor(&self, level: u32, j: u64, s: u32, f: usize) -> Option<(u64, u32)> {
        let g = |d: u64| HILBERT2D_G[d as usize] as u32;
        let mut s = s;
        for k in 0..level {
            let d = (j >> (2 * k)) & 3;
            let sp = s ^ g(d);
            let jw = self.n[((d as u32 * 4 + sp) * 4) as usize + f];
            if jw == NIL {
                s = sp;
                continue;
            }
            // neighbor found k levels up; descend with Ω, recomputing v's ancestors on the way
            let mut ws = sp ^ g(jw as u64);
            let mut vs = sp ^ g(d);
            let mut pos = ((j >> (2 * k + 2)) << 2) | jw as u64;
            for i in (0..k).rev() {
                let dv = (j >> (2 * i)) & 3;
                let jw = self.omega[(((dv as u32 * 4 + vs) * 4 + ws) * 4) as usize + f];
                if jw == NIL {
                    return None;
                }
                pos = (pos << 2) | jw as u64;
                ws ^= g(jw as u64);
                vs ^= g(dv);
            }
            return Some((pos, ws));
        }
        None
    }
}

/// Neighbors for curves with the palindrome property: ascend to the first
/// level with a sibling neighbor, then rewrite the digits in one step.
/// Positions are 128-bit; no memory is used beyond the tables.
#[derive(Clone, Debug)]
pub struct PalindromeKernel {
    b: u32,
    states: usize,
    facets: usize,
    max_level: u32,
    n: Vec<u8>,
    fp: Vec<u8>,
    parent: Vec<u8>,
    facet_counts: Vec<u8>,
}

impl PalindromeKernel {
    pub fn new(t: &CurveTables) -> Result<Self, EngineError> {
        if !t.palindrome {
            return Err(EngineError::KernelMismatch("tables lack the palindrome property".into()));
        }
        if t.b > 255 || t.state_count > 255 || t.facet_count > 255 {
            return Err(EngineError::KernelMismatch("tables too wide for byte entries".into()));
        }
        let Some(parent) = &t.parent_state else { return Err(EngineError::NotInvertible) };
        let byte = |v: Option<u32>| v.map_or(NIL, |x| x as u8);
        let mut n = Vec::with_capacity(t.n.len());
        let mut fp = Vec::with_capacity(t.fp.len());
        for j in 0..t.b {
            for s in 0..t.state_count {
                for f in 0..t.facet_count {
                    n.push(byte(t.n(j, s, f)));
                    fp.push(byte(t.fp(j, s, f).map(|x| x as u32)));
                }
            }
        }
        let mut max_level = 0;
        let mut cap = u128::MAX;
        while cap >= t.b as u128 {
            cap /= t.b as u128;
            max_level += 1;
        }
        Ok(PalindromeKernel {
            b: t.b,
            states: t.state_count,
            facets: t.facet_count,
            max_level,
            n,
            fp,
            parent: parent.iter().map(|&p| p as u8).collect(),
            facet_counts: (0..t.state_count).map(|s| t.facets.count(s) as u8).collect(),
        })
    }

    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    /// Checked form of [`PalindromeKernel::neighbor`].
    pub fn neighbor_checked(&self, level: u32, j: u128, s: usize, f: usize) -> Result<Option<u128>, EngineError> {
        if level > self.max_level {
            return Err(EngineError::Tree(TreeError::Capacity { level }));
        }
        if j >= (self.b as u128).pow(level) {
            return Err(out_of_range(level, j));
        }
        if s >= self.states {
            return Err(EngineError::Tree(TreeError::UnknownState(s)));
        }
        let count = self.facet_counts[s] as usize;
        if f >= count {
            return Err(EngineError::FacetOutOfRange { f, count });
        }
        Ok(self.neighbor(level, j, s, f))
    }

    /// Position of the `f`-neighbor of `(l, j, s)`:
    /// `j - (j mod b^k) + a' b^(k-1) + (b^(k-1) - 1 - (j mod b^(k-1)))`.
    #[inline]
    pub fn neighbor(&self, level: u32, j: u128, s: usize, f: usize) -> Option<u128> {
        let b = self.b as u128;
        let (mut rest, mut s, mut f) = (j, s, f);
        let mut pk1 = 1u128; // b^(k-1)
        for _ in 0..level {
            let d = (rest % b) as usize;
            rest /= b;
            let sp = self.parent[s * self.b as usize + d] as usize;
            let i = (d * self.states + sp) * self.facets + f;
            let a = self.n[i];
            if a != NIL {
                let low = j % pk1;
                return Some(rest * pk1 * b + a as u128 * pk1 + (pk1 - 1 - low));
            }
            let p = self.fp[i];
            if p == NIL {
                return None;
            }
            f = p as usize;
            s = sp;
            pk1 *= b;
        }
        None
    }
}

/// 2D Sierpinski neighbor in the single-state model: facets are the edges
/// `{0,1}`, `{0,2}` (hypotenuse), `{1,2}` of the vertex triple. Child 0 meets
/// its sibling through facet 2, child 1 through facet 0; other facets map to
/// the parent by `f ↦ 1 - f + 2a` for child index `a`. The result flips the
/// `k` lowest bits.
#[inline]
pub fn sierpinski2d_neighbor_fast(level: u32, j: u64, f: usize) -> Option<u64> {
    let mut f = f as u32;
    for k in 0..level {
        let a = ((j >> k) & 1) as u32;
        if f == 2 * (1 - a) {
            let flip = if k == 63 { u64::MAX } else { (1u64 << (k + 1)) - 1 };
            return Some(j ^ flip);
        }
        f = (1 + 2 * a).wrapping_sub(f);
    }
    None
}

/// Checked form of [`sierpinski2d_neighbor_fast`].
pub fn sierpinski2d_neighbor_checked(level: u32, j: u64, f: usize) -> Result<Option<u64>, EngineError> {
    if level > 64 {
        return Err(EngineError::Tree(TreeError::Capacity { level }));
    }
    if level < 64 && j >> level != 0 {
        return Err(out_of_range(level, j));
    }
    if f >= 3 {
        return Err(EngineError::FacetOutOfRange { f, count: 3 });
    }
    Ok(sierpinski2d_neighbor_fast(level, j, f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn morton_examples() {
        assert_eq!(morton_neighbor(2, 2, 3, 1).unwrap(), Some(6));
        assert_eq!(morton_neighbor(2, 2, 3, 0).unwrap(), Some(2));
        // x = 3 column: j = 0b0101 has x = 3, y = 0
        assert_eq!(morton_neighbor(2, 2, 5, 1).unwrap(), None);
    }

    #[test]
    fn hilbert_state_examples() {
        assert_eq!(hilbert2d_state_fast(2, 1).unwrap(), 1);
        assert_eq!(hilbert2d_state_fast(3, 28).unwrap(), 3);
        assert_eq!(hilbert2d_state_fast(0, 0).unwrap(), 0);
    }

    #[test]
    fn sierpinski_example() {
        assert_eq!(sierpinski2d_neighbor_fast(2, 1, 1), Some(2));
    }
}
