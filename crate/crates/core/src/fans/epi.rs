//! Epimorphism enumeration, structured and naive.

use super::{check_epimorphism, FanMap, OrderedFan};

/// Subsets of `1..=n` of size at most `k`, by size then lexicographically.
fn step_sets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in 0..=k.min(n) {
        let mut cur = Vec::with_capacity(size);
        fn rec(n: usize, size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == size {
                out.push(cur.clone());
                return;
            }
            for x in start..=n {
                cur.push(x);
                rec(n, size, x + 1, cur, out);
                cur.pop();
            }
        }
        rec(n, size, 1, &mut cur, &mut out);
    }
    out
}

/// Compositions of `n` into `m` positive parts, as boundary tuples
/// `1 = k_1 < ... < k_{m+1} = n + 1`, lexicographic.
fn boundary_tuples(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![1];
    fn rec(n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            let mut t = cur.clone();
            t.push(n + 1);
            out.push(t);
            return;
        }
        let last = *cur.last().unwrap();
        let left = m - cur.len();
        for k in last + 1..=n + 1 - left {
            cur.push(k);
            rec(n, m, cur, out);
            cur.pop();
        }
    }
    if m >= 1 && n >= m {
        rec(n, m, &mut cur, &mut out);
    }
    out
}

/// All epimorphisms `B -> A`: boundary tuples outermost, then unit-step
/// branch maps in branch order, kept when every group has a branch reaching
/// the top. A group's first branch must leave the root, so a branch that
/// collapses to the root is counted once, in the earlier group.
pub fn enumerate_epimorphisms(b: OrderedFan, a: OrderedFan) -> Vec<FanMap> {
    if a.height() == 0 {
        return vec![FanMap::new(b, a, vec![0; b.vertex_count()]).expect("constant map is well formed")];
    }
    if b.height() < a.height() || b.width() < a.width() {
        return Vec::new();
    }
    let options = step_sets(b.height(), a.height());
    let mut out = Vec::new();
    for bounds in boundary_tuples(b.width(), a.width()) {
        let mut choice: Vec<(usize, Vec<usize>)> = Vec::with_capacity(b.width());
        extend(&bounds, &options, a, b, 1, &mut choice, &mut out);
    }
    out
}

fn extend(
    bounds: &[usize],
    options: &[Vec<usize>],
    a: OrderedFan,
    b: OrderedFan,
    group: usize,
    choice: &mut Vec<(usize, Vec<usize>)>,
    out: &mut Vec<FanMap>,
) {
    if group > a.width() {
        out.push(FanMap::from_steps(b, a, choice).expect("structured choices are well formed"));
        return;
    }
    let (lo, hi) = (bounds[group - 1], bounds[group]);
    let size = hi - lo;
    // Odometer over the options of this group's branches.
    let mut idx = vec![0usize; size];
    loop {
        let sets: Vec<&Vec<usize>> = idx.iter().map(|&i| &options[i]).collect();
        let first_leaves = group == 1 || !sets[0].is_empty();
        let reaches = sets.iter().any(|s| s.len() == a.height());
        if first_leaves && reaches {
            for s in &sets {
                choice.push((group, (*s).clone()));
            }
            extend(bounds, options, a, b, group + 1, choice, out);
            choice.truncate(choice.len() - size);
        }
        let mut pos = size;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < options.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// All epimorphisms by filtering vertex maps: vertices are assigned in
/// order and a partial map is abandoned as soon as an `R` or `S` pair among
/// assigned vertices is not preserved; complete maps pass the full check.
pub fn naive_epimorphisms(b: OrderedFan, a: OrderedFan) -> Vec<FanMap> {
    let n = b.vertex_count();
    let mut assign = vec![0usize; n];
    let mut out = Vec::new();
    fn rec(pos: usize, b: OrderedFan, a: OrderedFan, assign: &mut Vec<usize>, out: &mut Vec<FanMap>) {
        if pos == assign.len() {
            let f = FanMap::new(b, a, assign.clone()).expect("assignment in range");
            if check_epimorphism(&f).is_ok() {
                out.push(f);
            }
            return;
        }
        'values: for v in 0..a.vertex_count() {
            assign[pos] = v;
            for x in 0..pos {
                let fx = assign[x];
                if (b.r(x, pos) && !a.r(fx, v)) || (b.r(pos, x) && !a.r(v, fx)) {
                    continue 'values;
                }
                if (b.s(x, pos) && !a.s(fx, v)) || (b.s(pos, x) && !a.s(v, fx)) {
                    continue 'values;
                }
            }
            rec(pos + 1, b, a, assign, out);
        }
    }
    rec(0, b, a, &mut assign, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn chain_counts() {
        for n in 0..=6 {
            for l in 1..=n {
                assert_eq!(enumerate_epimorphisms(OrderedFan::chain(n), OrderedFan::chain(l)).len(), binom(n, l));
            }
        }
        assert_eq!(enumerate_epimorphisms(OrderedFan::chain(2), OrderedFan::chain(1)).len(), 2);
        assert_eq!(enumerate_epimorphisms(OrderedFan::new(2, 2).unwrap(), OrderedFan::chain(1)).len(), 8);
    }

    #[test]
    fn structured_matches_naive_small() {
        for bh in 0..=2 {
            for bw in 1..=3 {
                for ah in 0..=2 {
                    for aw in 1..=2 {
                        let b = OrderedFan::new(bh, bw).unwrap();
                        let a = OrderedFan::new(ah, aw).unwrap();
                        let mut s = enumerate_epimorphisms(b, a);
                        let mut n = naive_epimorphisms(b, a);
                        for f in &s {
                            check_epimorphism(f).unwrap();
                        }
                        let len = s.len();
                        s.sort();
                        s.dedup();
                        assert_eq!(s.len(), len, "duplicates for {b} -> {a}");
                        n.sort();
                        assert_eq!(s, n, "{b} -> {a}");
                    }
                }
            }
        }
    }
}
