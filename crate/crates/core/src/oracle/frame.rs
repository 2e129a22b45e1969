use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::OracleError;

/// Largest frame size the enumerator accepts.
pub const MAX_ENUM_SIZE: usize = 3;

/// A finite Routley-Meyer frame over worlds `0..n`. The ternary relation is
/// stored as one bitmask of third coordinates per pair `(a, b)`; the order
/// `u ⪯ v iff ∃o ∈ O. R o u v` is derived at construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "FrameJson", try_from = "FrameJson")]
pub struct RmFrame {
    n: usize,
    normal: u32,
    r: Vec<u32>,
    star: Vec<usize>,
    up: Vec<u32>,
    down: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct FrameJson {
    n: usize,
    #[serde(rename = "O")]
    normal: Vec<usize>,
    #[serde(rename = "R")]
    r: Vec<[usize; 3]>,
    star: Vec<usize>,
}

impl From<RmFrame> for FrameJson {
    fn from(f: RmFrame) -> Self {
        FrameJson { n: f.n, normal: f.normal_worlds(), r: f.triples(), star: f.star.clone() }
    }
}

impl TryFrom<FrameJson> for RmFrame {
    type Error = OracleError;
    fn try_from(j: FrameJson) -> Result<Self, Self::Error> {
        let normal = j.normal.iter().fold(0u32, |m, &o| m | (1 << o.min(31)));
        RmFrame::new(j.n, normal, j.r.iter().map(|t| (t[0], t[1], t[2])), j.star)
    }
}

impl RmFrame {
    /// Build a candidate frame; only checks that every index is in range.
    pub fn new(
        n: usize,
        normal: u32,
        triples: impl IntoIterator<Item = (usize, usize, usize)>,
        star: Vec<usize>,
    ) -> Result<Self, OracleError> {
        if n == 0 || n > 32 {
            return Err(OracleError::InvalidFrame(format!("size {n} out of range")));
        }
        let all = full(n);
        if normal & !all != 0 {
            return Err(OracleError::InvalidFrame("normal world out of range".into()));
        }
        let mut r = vec![0u32; n * n];
        for (a, b, c) in triples {
            if a >= n || b >= n || c >= n {
                return Err(OracleError::InvalidFrame(format!("triple ({a},{b},{c}) out of range")));
            }
            r[a * n + b] |= 1 << c;
        }
        if star.len() != n || star.iter().any(|&s| s >= n) {
            return Err(OracleError::InvalidFrame("star is not a map on the worlds".into()));
        }
        Ok(Self::from_masks(n, normal, r, star))
    }

    pub(crate) fn from_masks(n: usize, normal: u32, r: Vec<u32>, star: Vec<usize>) -> Self {
        let mut up = vec![0u32; n];
        for (u, slot) in up.iter_mut().enumerate() {
            for o in 0..n {
                if normal >> o & 1 == 1 {
                    *slot |= r[o * n + u];
                }
            }
        }
        let mut down = vec![0u32; n];
        for u in 0..n {
            for v in 0..n {
                if up[u] >> v & 1 == 1 {
                    down[v] |= 1 << u;
                }
            }
        }
        RmFrame { n, normal, r, star, up, down }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn all(&self) -> u32 {
        full(self.n)
    }

    pub fn normal(&self) -> u32 {
        self.normal
    }

    pub fn normal_worlds(&self) -> Vec<usize> {
        (0..self.n).filter(|&o| self.is_normal(o)).collect()
    }

    pub fn is_normal(&self, w: usize) -> bool {
        self.normal >> w & 1 == 1
    }

    pub fn r(&self, a: usize, b: usize, c: usize) -> bool {
        self.r[a * self.n + b] >> c & 1 == 1
    }

    /// `{c | R a b c}`.
    pub fn r_mask(&self, a: usize, b: usize) -> u32 {
        self.r[a * self.n + b]
    }

    pub fn triples(&self) -> Vec<[usize; 3]> {
        let n = self.n;
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.r(a, b, c) {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }

    /// Relation as a single bitmask, bit `a·n² + b·n + c`.
    pub fn r_bits(&self) -> u64 {
        let n = self.n;
        let mut bits = 0u64;
        for t in self.triples() {
            bits |= 1 << (t[0] * n * n + t[1] * n + t[2]);
        }
        bits
    }

    pub fn star(&self, w: usize) -> usize {
        self.star[w]
    }

    pub fn star_map(&self) -> &[usize] {
        &self.star
    }

    pub fn leq(&self, u: usize, v: usize) -> bool {
        self.up[u] >> v & 1 == 1
    }

    /// `↑u`.
    pub fn up(&self, u: usize) -> u32 {
        self.up[u]
    }

    /// `↓v`.
    pub fn down(&self, v: usize) -> u32 {
        self.down[v]
    }

    pub fn up_closure(&self, mask: u32) -> u32 {
        bits(mask).fold(0, |acc, u| acc | self.up[u])
    }

    pub fn is_upset(&self, mask: u32) -> bool {
        self.up_closure(mask) == mask
    }

    /// All up-sets of `(W, ⪯)`, ascending as bitmasks.
    pub fn upsets(&self) -> Vec<u32> {
        (0..=self.all()).filter(|&m| self.is_upset(m)).collect()
    }

    /// `⪯` is the identity relation.
    pub fn is_antichain(&self) -> bool {
        (0..self.n).all(|u| self.up[u] == 1 << u)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("frame serializes")
    }
}

pub(crate) fn full(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Indices of the set bits of `mask`.
pub(crate) fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&k| mask >> k & 1 == 1)
}

/// The six Routley-Meyer frame conditions for the derived order.
pub fn check_frame(f: &RmFrame) -> bool {
    let n = f.n;
    let w = 0..n;
    // 1. reflexivity
    if !w.clone().all(|x| f.leq(x, x)) {
        return false;
    }
    for x in 0..n {
        for y in 0..n {
            if !f.leq(x, y) {
                continue;
            }
            for u in 0..n {
                // 2. x ⪯ y, R y u v ⟹ R x u v
                if f.r_mask(y, u) & !f.r_mask(x, u) != 0 {
                    return false;
                }
                // 3. x ⪯ y, R u y v ⟹ R u x v
                if f.r_mask(u, y) & !f.r_mask(u, x) != 0 {
                    return false;
                }
                // 4. x ⪯ y, R u v x ⟹ R u v y
                for v in 0..n {
                    if f.r(u, v, x) && !f.r(u, v, y) {
                        return false;
                    }
                }
            }
            // 5. star is antitone
            if !f.leq(f.star(y), f.star(x)) {
                return false;
            }
            // 6. O is an up-set
            if f.is_normal(x) && !f.is_normal(y) {
                return false;
            }
        }
    }
    true
}

/// All preorders on `0..n`, as `up[u]` masks.
pub(crate) fn preorders(n: usize) -> Vec<Vec<u32>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|(a, b)| a != b).collect();
    let mut out = Vec::new();
    for choice in 0u32..(1 << pairs.len()) {
        let mut up: Vec<u32> = (0..n).map(|u| 1 << u).collect();
        for (k, &(a, b)) in pairs.iter().enumerate() {
            if choice >> k & 1 == 1 {
                up[a] |= 1 << b;
            }
        }
        let transitive = (0..n).all(|a| bits(up[a]).all(|b| up[b] & !up[a] == 0));
        if transitive {
            out.push(up);
        }
    }
    out
}

/// Relations compatible with a fixed normal set and preorder: closed
/// downward in the first two coordinates and upward in the third, with
/// `R o u v` for some normal `o` exactly when `u ⪯ v`.
fn relations_for(n: usize, normal: u32, up: &[u32]) -> Vec<u64> {
    let t = n * n * n;
    let idx = |a: usize, b: usize, c: usize| a * n * n + b * n + c;
    let leq = |u: usize, v: usize| up[u] >> v & 1 == 1;
    let mut forced_in = vec![0u64; t];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut m = 0u64;
                for a2 in 0..n {
                    for b2 in 0..n {
                        for c2 in 0..n {
                            if leq(a2, a) && leq(b2, b) && leq(c, c2) {
                                m |= 1 << idx(a2, b2, c2);
                            }
                        }
                    }
                }
                forced_in[idx(a, b, c)] = m;
            }
        }
    }
    let mut forced_out = vec![0u64; t];
    for s in 0..t {
        for k in 0..t {
            if forced_in[s] >> k & 1 == 1 {
                forced_out[k] |= 1 << s;
            }
        }
    }
    let mut out0 = 0u64;
    for o in bits(normal) {
        for u in 0..n {
            for v in 0..n {
                if !leq(u, v) {
                    out0 |= forced_out[idx(o, u, v)];
                }
            }
        }
    }
    // each related pair needs a normal witness
    let witnesses: Vec<u64> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| leq(u, v))
        .map(|(u, v)| bits(normal).fold(0u64, |m, o| m | 1 << idx(o, u, v)))
        .collect();

    let mut result = Vec::new();
    let mut stack = vec![(0usize, 0u64, out0)];
    while let Some((k, inn, out)) = stack.pop() {
        if witnesses.iter().any(|w| w & !out == 0) {
            continue;
        }
        if k == t {
            if witnesses.iter().all(|w| w & inn != 0) {
                result.push(inn);
            }
            continue;
        }
        let bit = 1u64 << k;
        if (inn | out) & bit != 0 {
            stack.push((k + 1, inn, out));
            continue;
        }
        let with = inn | forced_in[k];
        if with & out == 0 {
            stack.push((k + 1, with, out));
        }
        let without = out | forced_out[k];
        if without & inn == 0 {
            stack.push((k + 1, inn, without));
        }
    }
    result
}

fn masks_from_bits(n: usize, r_bits: u64) -> Vec<u32> {
    let mut r = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if r_bits >> (a * n * n + b * n + c) & 1 == 1 {
                    r[a * n + b] |= 1 << c;
                }
            }
        }
    }
    r
}

/// Candidate frame from an `(O, R, star)` triple in bitmask form.
pub fn frame_from_bits(n: usize, normal: u32, r_bits: u64, star: Vec<usize>) -> RmFrame {
    RmFrame::from_masks(n, normal, masks_from_bits(n, r_bits), star)
}

/// Star maps on `0..n` in lexicographic order.
pub(crate) fn star_maps(n: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(n as u32);
    (0..total).map(move |mut k| {
        let mut s = vec![0; n];
        for slot in s.iter_mut().rev() {
            *slot = k % n;
            k /= n;
        }
        s
    })
}

/// Lazy stream of frames in lexicographic `(O, R, star)` order.
pub struct FrameStream {
    n: usize,
    antichain_only: bool,
    next_normal: u32,
    relations: VecDeque<u64>,
    current: Option<(u32, u64, RmFrame)>,
    stars: Vec<Vec<usize>>,
    star_at: usize,
}

impl FrameStream {
    fn refill(&mut self) -> bool {
        while self.relations.is_empty() {
            if self.next_normal > full(self.n) {
                return false;
            }
            let normal = self.next_normal;
            self.next_normal += 1;
            let mut rels = Vec::new();
            for up in preorders(self.n) {
                if self.antichain_only && (0..self.n).any(|u| up[u] != 1 << u) {
                    continue;
                }
                let is_upset = bits(normal).all(|o| up[o] & !normal == 0);
                if is_upset {
                    rels.extend(relations_for(self.n, normal, &up));
                }
            }
            rels.sort_unstable();
            self.relations = rels.into_iter().collect();
            self.current = None;
        }
        true
    }
}

impl Iterator for FrameStream {
    type Item = RmFrame;

    fn next(&mut self) -> Option<RmFrame> {
        loop {
            if let Some((normal, r_bits, base)) = &self.current {
                while self.star_at < self.stars.len() {
                    let star = &self.stars[self.star_at];
                    self.star_at += 1;
                    let antitone = (0..self.n)
                        .all(|x| bits(base.up(x)).all(|y| base.leq(star[y], star[x])));
                    if antitone {
                        return Some(frame_from_bits(self.n, *normal, *r_bits, star.clone()));
                    }
                }
                self.current = None;
            }
            if self.relations.is_empty() && !self.refill() {
                return None;
            }
            let r_bits = self.relations.pop_front()?;
            let normal = self.next_normal - 1;
            let base = frame_from_bits(self.n, normal, r_bits, (0..self.n).collect());
            self.current = Some((normal, r_bits, base));
            self.star_at = 0;
        }
    }
}

/// Every Routley-Meyer frame with `n` worlds, in lexicographic order of
/// `(O, R, star)` as bitmasks and star tuples.
pub fn enumerate_frames(n: usize) -> Result<FrameStream, OracleError> {
    stream(n, false)
}

/// Frames whose order is discrete, in the same order as
/// [`enumerate_frames`].
pub fn enumerate_antichain_frames(n: usize) -> Result<FrameStream, OracleError> {
    stream(n, true)
}

fn stream(n: usize, antichain_only: bool) -> Result<FrameStream, OracleError> {
    if n == 0 || n > MAX_ENUM_SIZE {
        return Err(OracleError::Budget(n));
    }
    Ok(FrameStream {
        n,
        antichain_only,
        next_normal: 0,
        relations: VecDeque::new(),
        current: None,
        stars: star_maps(n).collect(),
        star_at: 0,
    })
}

/// Exhaustive filter over every candidate triple; the reference the
/// enumerator is checked against.
pub fn brute_force_frames(n: usize) -> Result<Vec<RmFrame>, OracleError> {
    if n == 0 || n > 2 {
        return Err(OracleError::Budget(n));
    }
    let mut out = Vec::new();
    for normal in 0..=full(n) {
        for r_bits in 0u64..(1 << (n * n * n)) {
            for star in star_maps(n) {
                let f = frame_from_bits(n, normal, r_bits, star);
                if check_frame(&f) {
                    out.push(f);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_point_frames() {
        let f = RmFrame::new(1, 1, [(0, 0, 0)], vec![0]).unwrap();
        assert!(check_frame(&f));
        let g = RmFrame::new(1, 0, [], vec![0]).unwrap();
        assert!(!check_frame(&g));
        let frames: Vec<_> = enumerate_frames(1).unwrap().collect();
        assert_eq!(frames, vec![f]);
    }

    #[test]
    fn total_two_point_frame() {
        let triples = (0..8).map(|k| (k >> 2 & 1, k >> 1 & 1, k & 1));
        let f = RmFrame::new(2, 0b11, triples, vec![0, 1]).unwrap();
        assert!(check_frame(&f));
        assert!(f.leq(0, 1) && f.leq(1, 0));
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for n in 1..=2 {
            let fast: Vec<_> = enumerate_frames(n).unwrap().collect();
            let slow = brute_force_frames(n).unwrap();
            assert_eq!(fast, slow, "n = {n}");
            assert!(fast.iter().all(check_frame));
        }
    }

    #[test]
    fn budget() {
        assert!(matches!(enumerate_frames(4), Err(OracleError::Budget(4))));
        assert!(enumerate_frames(0).is_err());
    }

    #[test]
    fn size_three_stream_is_lazy_and_valid() {
        let first: Vec<_> = enumerate_frames(3).unwrap().take(200).collect();
        assert_eq!(first.len(), 200);
        assert!(first.iter().all(check_frame));
        let keys: Vec<_> = first.iter().map(|f| (f.normal(), f.r_bits(), f.star_map().to_vec())).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn antichain_stream() {
        let all: Vec<_> = enumerate_frames(2).unwrap().filter(RmFrame::is_antichain).collect();
        let only: Vec<_> = enumerate_antichain_frames(2).unwrap().collect();
        assert_eq!(all, only);
    }

    #[test]
    fn json_roundtrip() {
        let f = RmFrame::new(2, 0b10, [(1, 0, 0), (1, 1, 1), (1, 0, 1)], vec![1, 0]).unwrap();
        let text = serde_json::to_string(&f).unwrap();
        assert!(text.contains("\"O\":[1]"));
        let back: RmFrame = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn preorder_count() {
        assert_eq!(preorders(1).len(), 1);
        assert_eq!(preorders(2).len(), 4);
        assert_eq!(preorders(3).len(), 29);
    }
}
