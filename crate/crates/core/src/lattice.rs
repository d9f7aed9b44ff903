//! The odd-part lattice of `M_m` and its Graver basis.
//!
//! Every unit constraint of `M_m` depends on `x` only through the odd part
//! `z_i = x_i - x_{m-i}` (`1 <= i < m/2`): the pair `{i, m-i}` contributes
//! `m` to every twisted weight and the residue `m/2` contributes `m/2`.
//! Writing `((u)) = {u} - 1/2`, the system becomes
//!
//! ```text
//!     sum_i z_i ((t*i/m)) = 0   for every unit t,      y = (sum_i x_i) / 2.
//! ```
//!
//! For even `m` an extra coordinate `b = x_{m/2}` enters only through the
//! parity condition `sum z_i + b = 0 (mod 2)`. A pair-free element of `M_m`
//! (no `x_i, x_{m-i}` both positive, `x_{m/2} <= 1`) is then the positive and
//! negative part of a lattice vector, and it is indecomposable exactly when
//! that vector is conformally minimal. So the indecomposables of `M_m` are
//! `M_m(1)` together with the Graver basis elements having `b >= 0`.
//!
//! The Graver basis is computed by project-and-lift: coordinates are made
//! sign-sensitive one at a time, and after each lift a completion procedure
//! restores the positive sum property with respect to the lifted coordinates.

use std::time::Instant;

use crate::monoid::{units, Modulus, MonoidVector};

/// Resource limits for the completion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    /// Cap on the number of vectors held by the completion.
    pub max_candidates: Option<usize>,
    /// Wall-clock deadline.
    pub deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn with_seconds(mut self, secs: f64) -> Self {
        self.deadline = Some(Instant::now() + std::time::Duration::from_secs_f64(secs));
        self
    }

    pub fn with_max_candidates(mut self, n: usize) -> Self {
        self.max_candidates = Some(n);
        self
    }

    pub(crate) fn timed_out(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

/// Why a bounded computation stopped early.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exhausted {
    Candidates,
    Time,
    Overflow,
    /// The modulus needs more lattice coordinates than supported.
    Dimension,
}

/// Coordinates `(z_1, ..., z_h[, b])` of the pair-free part of `M_m`.
#[derive(Clone, Debug)]
pub struct OddLattice {
    m: Modulus,
    half: usize,
    parity: bool,
    basis: Vec<Vec<i64>>,
}

impl OddLattice {
    pub fn new(m: Modulus) -> Self {
        let n = m.get() as i128;
        let half = ((m.get() - 1) / 2) as usize;
        let parity = m.get().is_multiple_of(2);
        // Columns: z_1..z_h, then b and an auxiliary w with sum z + b = 2w.
        let cols = half + if parity { 2 } else { 0 };
        let mut rows: Vec<Vec<i128>> = units(m)
            .lower_half()
            .map(|t| {
                let mut row = vec![0i128; cols];
                for i in 1..=half {
                    let r = m.residue(t as u64 * i as u64) as i128;
                    row[i - 1] = 2 * r - n;
                }
                row
            })
            .collect();
        if parity {
            let mut row = vec![1i128; cols];
            row[half + 1] = -2;
            rows.push(row);
        }
        let kernel = integer_kernel(&rows, cols);
        let dim = half + parity as usize;
        let mut basis: Vec<Vec<i64>> = kernel
            .into_iter()
            .map(|v| v[..dim].iter().map(|&e| i64::try_from(e).expect("kernel entry fits i64")).collect())
            .collect();
        size_reduce(&mut basis);
        OddLattice { m, half, parity, basis }
    }

    pub fn modulus(&self) -> Modulus {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.half + self.parity as usize
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    /// The pair-free monoid vector whose odd part is `v`; `None` when the
    /// `b` coordinate is negative.
    pub fn to_monoid(&self, v: &[i32]) -> Option<MonoidVector> {
        let m = self.m.get() as usize;
        let mut x = vec![0u32; m - 1];
        let mut size = 0u64;
        for i in 1..=self.half {
            let z = v[i - 1];
            if z > 0 {
                x[i - 1] = z as u32;
            } else if z < 0 {
                x[m - i - 1] = (-z) as u32;
            }
            size += z.unsigned_abs() as u64;
        }
        if self.parity {
            let b = v[self.half];
            if b < 0 {
                return None;
            }
            x[m / 2 - 1] = b as u32;
            size += b as u64;
        }
        debug_assert!(size.is_multiple_of(2));
        Some(MonoidVector::new(x, (size / 2) as u32))
    }

    /// Graver basis of the lattice, both signs of every element included.
    pub fn graver_basis(&self, budget: &Budget) -> Result<Vec<Vec<i32>>, Exhausted> {
        graver_basis(&self.basis, self.dim(), budget)
    }
}

/// Kernel of `rows` over the integers, by unimodular column operations.
fn integer_kernel(rows: &[Vec<i128>], n: usize) -> Vec<Vec<i128>> {
    // Column j: the transformed matrix column followed by the column of U.
    let r = rows.len();
    let mut cols: Vec<Vec<i128>> = (0..n)
        .map(|j| {
            let mut c: Vec<i128> = rows.iter().map(|row| row[j]).collect();
            c.extend((0..n).map(|k| i128::from(k == j)));
            c
        })
        .collect();
    let mut pivot = 0;
    for i in 0..r {
        loop {
            let best = (pivot..n).filter(|&j| cols[j][i] != 0).min_by_key(|&j| cols[j][i].abs());
            let Some(best) = best else { break };
            cols.swap(pivot, best);
            let mut done = true;
            for j in pivot + 1..n {
                let q = cols[j][i] / cols[pivot][i];
                if q != 0 {
                    let (head, tail) = cols.split_at_mut(j);
                    for (a, b) in tail[0].iter_mut().zip(&head[pivot]) {
                        *a -= q * b;
                    }
                }
                if cols[j][i] != 0 {
                    done = false;
                }
            }
            if done {
                pivot += 1;
                break;
            }
        }
        if pivot == n {
            break;
        }
    }
    cols[pivot..].iter().map(|c| c[r..].to_vec()).collect()
}

/// Pairwise size reduction of a lattice basis (keeps the lattice).
fn size_reduce(basis: &mut [Vec<i64>]) {
    let dot = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| (x * y) as i128).sum::<i128>();
    loop {
        let mut changed = false;
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                if i == j {
                    continue;
                }
                let nj = dot(&basis[j], &basis[j]);
                if nj == 0 {
                    continue;
                }
                let p = dot(&basis[i], &basis[j]);
                // round(p / nj)
                let q = (2 * p + nj).div_euclid(2 * nj);
                if q != 0 {
                    let bj = basis[j].clone();
                    let before = dot(&basis[i], &basis[i]);
                    let cand: Vec<i64> = basis[i].iter().zip(&bj).map(|(a, b)| a - q as i64 * b).collect();
                    if dot(&cand, &cand) < before {
                        basis[i] = cand;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
}

const NONE: u32 = u32::MAX;
const LEAF_SPLIT: usize = 12;

/// Flat storage of vectors with their sign supports.
struct Store {
    n: usize,
    data: Vec<i32>,
    pos: Vec<u64>,
    neg: Vec<u64>,
}

impl Store {
    fn new(n: usize) -> Self {
        Store { n, data: Vec::new(), pos: Vec::new(), neg: Vec::new() }
    }

    fn push(&mut self, v: &[i32]) -> u32 {
        let (p, q) = supports(v);
        self.data.extend_from_slice(v);
        self.pos.push(p);
        self.neg.push(q);
        (self.pos.len() - 1) as u32
    }

    #[inline]
    fn get(&self, id: u32) -> &[i32] {
        let s = id as usize * self.n;
        &self.data[s..s + self.n]
    }

    fn len(&self) -> usize {
        self.pos.len()
    }
}

fn supports(v: &[i32]) -> (u64, u64) {
    let mut p = 0u64;
    let mut q = 0u64;
    for (c, &e) in v.iter().enumerate() {
        if e > 0 {
            p |= 1 << c;
        } else if e < 0 {
            q |= 1 << c;
        }
    }
    (p, q)
}

/// `h` is conformally below `s` on the coordinates in `mask`.
#[inline]
fn below(h: &[i32], hp: u64, hn: u64, s: &[i32], sp: u64, sn: u64, mask: u64) -> bool {
    if (hp & mask) & !sp != 0 || (hn & mask) & !sn != 0 {
        return false;
    }
    let mut bits = (hp | hn) & mask;
    while bits != 0 {
        let c = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        if h[c].unsigned_abs() > s[c].unsigned_abs() {
            return false;
        }
    }
    true
}

struct Node {
    depth: u16,
    leaf: Vec<u32>,
    children: Option<[u32; 3]>,
}

/// Support tree over the sign-sensitive coordinates, for reducer lookup.
struct Tree {
    coords: Vec<usize>,
    mask: u64,
    nodes: Vec<Node>,
}

impl Tree {
    fn new(coords: &[usize]) -> Self {
        let mask = coords.iter().fold(0u64, |m, &c| m | (1 << c));
        Tree { coords: coords.to_vec(), mask, nodes: vec![Node { depth: 0, leaf: Vec::new(), children: None }] }
    }

    fn branch_of(store: &Store, id: u32, c: usize) -> usize {
        let e = store.get(id)[c];
        (e.signum() + 1) as usize
    }

    fn insert(&mut self, store: &Store, id: u32) {
        self.insert_at(store, id, 0);
    }

    fn insert_at(&mut self, store: &Store, id: u32, start: u32) {
        let mut cur = start as usize;
        loop {
            match self.nodes[cur].children {
                Some(ch) => {
                    let d = self.nodes[cur].depth as usize;
                    let b = Self::branch_of(store, id, self.coords[d]);
                    if ch[b] == NONE {
                        let idx = self.nodes.len() as u32;
                        self.nodes.push(Node { depth: d as u16 + 1, leaf: Vec::new(), children: None });
                        self.nodes[cur].children.as_mut().unwrap()[b] = idx;
                        cur = idx as usize;
                    } else {
                        cur = ch[b] as usize;
                    }
                }
                None => {
                    self.nodes[cur].leaf.push(id);
                    let d = self.nodes[cur].depth as usize;
                    if self.nodes[cur].leaf.len() > LEAF_SPLIT && d < self.coords.len() {
                        let items = std::mem::take(&mut self.nodes[cur].leaf);
                        self.nodes[cur].children = Some([NONE; 3]);
                        for it in items {
                            self.insert_at(store, it, cur as u32);
                        }
                    }
                    return;
                }
            }
        }
    }

    /// Some stored `h != skip` with `h` conformally below `s` on the tree's
    /// coordinates.
    fn find(&self, store: &Store, s: &[i32], sp: u64, sn: u64, skip: u32, stack: &mut Vec<u32>) -> Option<u32> {
        stack.clear();
        stack.push(0);
        while let Some(cur) = stack.pop() {
            let node = &self.nodes[cur as usize];
            match node.children {
                Some(ch) => {
                    let c = self.coords[node.depth as usize];
                    let e = s[c];
                    if ch[1] != NONE {
                        stack.push(ch[1]);
                    }
                    let side = if e > 0 { ch[2] } else if e < 0 { ch[0] } else { NONE };
                    if side != NONE {
                        stack.push(side);
                    }
                }
                None => {
                    for &h in &node.leaf {
                        if h != skip
                            && below(store.get(h), store.pos[h as usize], store.neg[h as usize], s, sp, sn, self.mask)
                        {
                            return Some(h);
                        }
                    }
                }
            }
        }
        None
    }
}

/// Reduce `s` in place by conformally smaller stored vectors.
fn normal_form(store: &Store, tree: &Tree, s: &mut [i32], stack: &mut Vec<u32>) -> Result<(), Exhausted> {
    loop {
        let (sp, sn) = supports(s);
        if (sp | sn) & tree.mask == 0 {
            return Ok(());
        }
        let Some(h) = tree.find(store, s, sp, sn, NONE, stack) else { return Ok(()) };
        let hv = store.get(h);
        // Largest multiple of h still below s.
        let mut q = u32::MAX;
        let mut bits = (store.pos[h as usize] | store.neg[h as usize]) & tree.mask;
        while bits != 0 {
            let c = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            q = q.min(s[c].unsigned_abs() / hv[c].unsigned_abs());
        }
        let q = q as i32;
        for (a, &b) in s.iter_mut().zip(hv) {
            *a = b.checked_mul(q).and_then(|d| a.checked_sub(d)).ok_or(Exhausted::Overflow)?;
        }
    }
}

/// Bring the kernel basis to a form where at most one vector is nonzero at
/// coordinate `j`; remove and return that vector, sign-normalised to `v_j > 0`.
fn split_kernel(kernel: &mut Vec<Vec<i64>>, j: usize) -> Option<Vec<i64>> {
    loop {
        let nz: Vec<usize> = (0..kernel.len()).filter(|&i| kernel[i][j] != 0).collect();
        match nz.len() {
            0 => return None,
            1 => {
                let mut w = kernel.swap_remove(nz[0]);
                if w[j] < 0 {
                    w.iter_mut().for_each(|e| *e = -*e);
                }
                return Some(w);
            }
            _ => {
                let p = *nz.iter().min_by_key(|&&i| kernel[i][j].abs()).unwrap();
                let pv = kernel[p].clone();
                for &i in &nz {
                    if i != p {
                        let q = kernel[i][j] / pv[j];
                        for (a, b) in kernel[i].iter_mut().zip(&pv) {
                            *a -= q * b;
                        }
                    }
                }
            }
        }
    }
}

fn to_i32(v: &[i64]) -> Result<Vec<i32>, Exhausted> {
    v.iter().map(|&e| i32::try_from(e).map_err(|_| Exhausted::Overflow)).collect()
}

/// Graver basis of the lattice spanned by `basis` in `Z^n` (`n <= 64`).
pub(crate) fn graver_basis(basis: &[Vec<i64>], n: usize, budget: &Budget) -> Result<Vec<Vec<i32>>, Exhausted> {
    assert!(n <= 64, "at most 64 coordinates are supported");
    let mut kernel: Vec<Vec<i64>> = basis.to_vec();
    let mut store = Store::new(n);
    let mut alive: Vec<u32> = Vec::new();
    let order: Vec<usize> = (0..n).collect();
    let mut stack = Vec::new();
    let mut s = vec![0i32; n];
    let mut pairs_seen = 0u64;

    for k in 0..n {
        let j = order[k];
        let lifted = &order[..=k];
        let old_mask = order[..k].iter().fold(0u64, |m, &c| m | (1 << c));

        // Compact the store to the surviving vectors.
        let mut next = Store::new(n);
        for &id in &alive {
            let v = store.get(id);
            let neg: Vec<i32> = v.iter().map(|e| -e).collect();
            next.push(v);
            next.push(&neg);
        }
        store = next;
        if let Some(w) = split_kernel(&mut kernel, j) {
            let w = to_i32(&w)?;
            let neg: Vec<i32> = w.iter().map(|e| -e).collect();
            store.push(&w);
            store.push(&neg);
        }
        let mut dead = vec![false; store.len()];
        let mut tree = Tree::new(lifted);
        for id in 0..store.len() as u32 {
            tree.insert(&store, id);
        }
        let norm = |v: &[i32]| lifted.iter().map(|&c| v[c].unsigned_abs() as u64).sum::<u64>();
        let mut plus: Vec<u32> = (0..store.len() as u32).filter(|&id| store.get(id)[j] > 0).collect();
        plus.sort_by_key(|&id| norm(store.get(id)));

        let mut i = 0;
        while i < plus.len() {
            let f = plus[i];
            i += 1;
            if dead[f as usize] {
                continue;
            }
            // Retire f if something else already lies below it.
            let fv = store.get(f).to_vec();
            let (fp, fnn) = supports(&fv);
            if let Some(h) = tree.find(&store, &fv, fp, fnn, f, &mut stack) {
                dead[f as usize] = true;
                dead[(f ^ 1) as usize] = true;
                s.copy_from_slice(&fv);
                let hv = store.get(h);
                for (a, &b) in s.iter_mut().zip(hv) {
                    *a = a.checked_sub(b).ok_or(Exhausted::Overflow)?;
                }
                normal_form(&store, &tree, &mut s, &mut stack)?;
                add_remainder(&mut store, &mut tree, &mut plus, &mut dead, &s, j)?;
                continue;
            }
            for idx in 0..i - 1 {
                let g = plus[idx];
                if dead[g as usize] {
                    continue;
                }
                let (gp, gn) = (store.pos[g as usize], store.neg[g as usize]);
                if fp & gp & old_mask != 0 || fnn & gn & old_mask != 0 {
                    continue;
                }
                pairs_seen += 1;
                if pairs_seen.is_multiple_of(4096) && budget.timed_out() {
                    return Err(Exhausted::Time);
                }
                let gv = store.get(g);
                for ((a, &x), &y) in s.iter_mut().zip(&fv).zip(gv) {
                    *a = x.checked_sub(y).ok_or(Exhausted::Overflow)?;
                }
                normal_form(&store, &tree, &mut s, &mut stack)?;
                add_remainder(&mut store, &mut tree, &mut plus, &mut dead, &s, j)?;
                if budget.max_candidates.is_some_and(|cap| store.len() > cap) {
                    return Err(Exhausted::Candidates);
                }
            }
        }

        // Keep only the conformally minimal vectors, one per sign pair.
        alive.clear();
        for id in (0..store.len() as u32).step_by(2) {
            if dead[id as usize] {
                continue;
            }
            let v = store.get(id);
            let (p, q) = supports(v);
            if tree.find(&store, v, p, q, id, &mut stack).is_none() {
                alive.push(id);
            }
        }
        if budget.timed_out() {
            return Err(Exhausted::Time);
        }
    }
    let mut out = Vec::with_capacity(2 * alive.len());
    for &id in &alive {
        let v = store.get(id);
        out.push(v.to_vec());
        out.push(v.iter().map(|e| -e).collect());
    }
    Ok(out)
}

/// Store `r` and `-r` unless `r` vanishes on the lifted coordinates. Ids are
/// allocated in pairs so that `id ^ 1` is the negation of `id`.
fn add_remainder(store: &mut Store, tree: &mut Tree, plus: &mut Vec<u32>, dead: &mut Vec<bool>, r: &[i32], j: usize) -> Result<(), Exhausted> {
    let (p, q) = supports(r);
    if (p | q) & tree.mask == 0 {
        return Ok(());
    }
    let neg: Vec<i32> = r.iter().map(|e| -e).collect();
    let a = store.push(r);
    let b = store.push(&neg);
    debug_assert_eq!(a ^ 1, b);
    tree.insert(store, a);
    tree.insert(store, b);
    dead.push(false);
    dead.push(false);
    if r[j] > 0 {
        plus.push(a);
    } else if r[j] < 0 {
        plus.push(b);
    }
    Ok(())
}
