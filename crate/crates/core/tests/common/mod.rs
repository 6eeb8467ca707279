#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use qchar_core::{DynkinData, Monomial, TPoly, VVector, Weight};

pub fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn data_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim_end).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

/// The E8 lowest-monomial display: `(node, index, mult)` in display order.
pub fn lowest_triples() -> Vec<(usize, i32, u32)> {
    let mut out = Vec::new();
    for line in data_lines(&fixture("e8_lowest_node5.txt")) {
        let (node, rest) = line.split_once(':').unwrap();
        let node: usize = node.trim().parse().unwrap();
        for tok in rest.split_whitespace() {
            let (k, m) = tok.split_once('^').unwrap_or((tok, "1"));
            out.push((node, k.parse().unwrap(), m.parse().unwrap()));
        }
    }
    out
}

pub fn lowest_vvector() -> VVector {
    VVector::from_entries(lowest_triples())
}

/// Weights and rows of the E8 IC table.
pub fn ic_table() -> (Vec<Weight>, Vec<Vec<TPoly>>) {
    let mut weights = Vec::new();
    let mut rows = Vec::new();
    for line in data_lines(&fixture("e8_ic_table.tsv")) {
        let mut cols = line.split('\t');
        weights.push(Weight::parse(cols.next().unwrap(), 8).unwrap());
        rows.push(cols.map(|c| c.parse().unwrap()).collect());
    }
    (weights, rows)
}

/// `fundamental node -> {weight: multiplicity}` from the decomposition fixture.
pub fn decompositions() -> BTreeMap<String, BTreeMap<Weight, TPoly>> {
    let mut out: BTreeMap<String, BTreeMap<Weight, TPoly>> = BTreeMap::new();
    for line in data_lines(&fixture("e8_decompositions.tsv")) {
        let c: Vec<&str> = line.split('\t').collect();
        out.entry(c[0].to_string())
            .or_default()
            .insert(Weight::parse(c[1], 8).unwrap(), c[2].parse().unwrap());
    }
    out
}

/// Column tableaux for the fundamentals of `A_n`: box `j` at shift `a` is
/// `Y[j-1,a+j]^-1 Y[j,a+j-1]`, and a column of height `r` anchored at
/// `Y[r,0]` puts row `s` at shift `r + 1 - 2s`.
pub fn a_n_tableaux(n: usize, r: usize) -> BTreeSet<Monomial> {
    fn boxed(n: usize, j: usize, a: i32) -> Vec<(usize, i32, i32)> {
        let mut f = Vec::new();
        if j > 1 {
            f.push((j - 1, a + j as i32, -1));
        }
        if j <= n {
            f.push((j, a + j as i32 - 1, 1));
        }
        f
    }
    let mut out = BTreeSet::new();
    let mut cols = vec![Vec::new()];
    for _ in 0..r {
        cols = cols
            .into_iter()
            .flat_map(|c: Vec<usize>| {
                let start = c.last().map_or(1, |&l| l + 1);
                (start..=n + 1).map(move |j| {
                    let mut c = c.clone();
                    c.push(j);
                    c
                })
            })
            .collect();
    }
    for c in cols {
        let factors = c
            .iter()
            .enumerate()
            .flat_map(|(s, &j)| boxed(n, j, r as i32 + 1 - 2 * (s as i32 + 1)));
        out.insert(Monomial::from_factors(factors));
    }
    out
}

/// Classical `t = 1` q-character by the colored expansion with simple
/// `sl2` pieces (Kirillov-Reshetikhin strings in general position), kept
/// independent of the engine. Panics on failure.
pub fn classical_oracle(data: &DynkinData, anchor: &Monomial) -> BTreeMap<Monomial, i64> {
    let rank = data.rank();
    // monomial -> (depth, colorings)
    let mut pending: BTreeMap<(u64, Monomial), Vec<i64>> = BTreeMap::new();
    let mut result = BTreeMap::new();
    pending.insert((0, anchor.clone()), vec![0; rank + 1]);
    while let Some(((depth, m), colors)) = pending.pop_first() {
        let non_dom: Vec<usize> = (1..=rank).filter(|&i| !m.is_i_dominant(i)).collect();
        let coeff = if depth == 0 {
            1
        } else {
            assert!(!non_dom.is_empty(), "l-dominant monomial {m} below the anchor");
            let c = colors[non_dom[0]];
            assert!(non_dom.iter().all(|&i| colors[i] == c), "colorings disagree at {m}");
            c
        };
        if coeff != 0 {
            result.insert(m.clone(), coeff);
        }
        for i in 1..=rank {
            if !m.is_i_dominant(i) {
                continue;
            }
            let a = coeff - colors[i];
            if a == 0 {
                continue;
            }
            for (steps, c) in sl2_simple(&m, i) {
                if steps.is_empty() {
                    continue;
                }
                let mut x = m.clone();
                for &k in &steps {
                    x = x.mul(&qchar_core::monomial::a_monomial(data, i, k).inverse());
                }
                let e = pending.entry((depth + steps.len() as u64, x)).or_insert_with(|| vec![0; rank + 1]);
                e[i] += a * c;
            }
        }
    }
    result
}

/// `L_i(m) / m` as multisets of `A[i,k]^{-1}` positions with multiplicity.
fn sl2_simple(m: &Monomial, i: usize) -> BTreeMap<Vec<i32>, i64> {
    let mut roots: Vec<i32> = m
        .node_factors(i)
        .iter()
        .flat_map(|f| std::iter::repeat_n(f.index, f.exp as usize))
        .collect();
    roots.sort();
    // greedy strings: start from the smallest remaining root, extend by +2
    let mut strings: Vec<(i32, i32)> = Vec::new();
    while let Some(&a) = roots.first() {
        roots.remove(0);
        let mut len = 1;
        while let Some(p) = roots.iter().position(|&x| x == a + 2 * len) {
            roots.remove(p);
            len += 1;
        }
        strings.push((a, len));
    }
    let mut acc: BTreeMap<Vec<i32>, i64> = BTreeMap::from([(Vec::new(), 1)]);
    for (a, l) in strings {
        let mut next = BTreeMap::new();
        for (steps, c) in &acc {
            for j in 0..=l {
                let mut s = steps.clone();
                s.extend((1..=j).map(|q| a + 2 * l - 2 * q + 1));
                s.sort();
                *next.entry(s).or_insert(0) += c;
            }
        }
        acc = next;
    }
    acc
}
