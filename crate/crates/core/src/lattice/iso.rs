use alloc::vec::Vec;

use super::{FiniteLattice, LatticeError, ISO_CAP};

type Signature = (usize, usize, usize, usize, usize);

fn signatures(l: &FiniteLattice) -> Vec<Signature> {
    let h = l.heights();
    let m = l.len();
    (0..m)
        .map(|x| {
            let below = (0..m).filter(|&y| l.leq(y, x)).count();
            let above = (0..m).filter(|&y| l.leq(x, y)).count();
            let up = (0..m).filter(|&y| l.covers(x, y)).count();
            let down = (0..m).filter(|&y| l.covers(y, x)).count();
            (h[x], below, above, up, down)
        })
        .collect()
}

/// Searches for an order isomorphism `a → b`; returns the image of each
/// element of `a`.
pub fn lattice_isomorphic(a: &FiniteLattice, b: &FiniteLattice) -> Result<Option<Vec<usize>>, LatticeError> {
    if a.len() != b.len() {
        return Ok(None);
    }
    if a.len() > ISO_CAP {
        return Err(LatticeError::TooLarge { size: a.len(), cap: ISO_CAP });
    }
    let (sa, sb) = (signatures(a), signatures(b));
    let mut ka = sa.clone();
    let mut kb = sb.clone();
    ka.sort();
    kb.sort();
    if ka != kb {
        return Ok(None);
    }
    let m = a.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&x| (sa[x].0, sa.iter().filter(|s| **s == sa[x]).count()));
    let cands: Vec<Vec<usize>> = (0..m).map(|x| (0..m).filter(|&y| sb[y] == sa[x]).collect()).collect();
    let mut map = alloc::vec![usize::MAX; m];
    let mut used = alloc::vec![false; m];
    if assign(a, b, &order, &cands, 0, &mut map, &mut used) {
        Ok(Some(map))
    } else {
        Ok(None)
    }
}

fn assign(
    a: &FiniteLattice,
    b: &FiniteLattice,
    order: &[usize],
    cands: &[Vec<usize>],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let x = order[depth];
    for &y in &cands[x] {
        if used[y] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&p| {
            let q = map[p];
            a.leq(p, x) == b.leq(q, y) && a.leq(x, p) == b.leq(y, q)
        });
        if !consistent {
            continue;
        }
        map[x] = y;
        used[y] = true;
        if assign(a, b, order, cands, depth + 1, map, used) {
            return true;
        }
        used[y] = false;
        map[x] = usize::MAX;
    }
    false
}
