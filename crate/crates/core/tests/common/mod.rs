//! Independent reference computations for the integration tests. Nothing here
//! calls the solver under test.

#![allow(dead_code)]

use credal::rational::{int, ratio};
use credal::{CredalSet, Distribution, Model, Rational, Relation, VarSet, VariableSpace};
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::Rng;

pub fn r(s: &str) -> Rational {
    credal::rational::parse_rational(s).unwrap()
}

pub fn rows(values: &[&[i64]]) -> Vec<Vec<Rational>> {
    values
        .iter()
        .map(|row| row.iter().map(|&v| int(v)).collect())
        .collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Unique solution of `rows` (each `(coefficients, rhs)`) in `n` unknowns, by
/// Gauss-Jordan elimination. `None` when the system is singular or inconsistent.
pub fn solve_unique(system: &[(Vec<Rational>, Rational)], n: usize) -> Option<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = system
        .iter()
        .map(|(c, b)| {
            let mut row = c.clone();
            row.push(b.clone());
            row
        })
        .collect();
    for (pivot_row, col) in (0..n).enumerate() {
        let p = (pivot_row..m.len()).find(|&i| !m[i][col].is_zero())?;
        m.swap(pivot_row, p);
        let lead = m[pivot_row][col].clone();
        for v in m[pivot_row].iter_mut() {
            *v = &*v / &lead;
        }
        let pivot = m[pivot_row].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != pivot_row && !row[col].is_zero() {
                let factor = row[col].clone();
                for (v, p) in row.iter_mut().zip(&pivot) {
                    *v -= &factor * p;
                }
            }
        }
    }
    if m[n..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    Some(m[..n].iter().map(|row| row[n].clone()).collect())
}

/// All vertices of a credal set, by brute force over choices of tight
/// inequalities. Meant for at most four states and a handful of constraints.
pub fn vertices(k: &CredalSet) -> Vec<Vec<Rational>> {
    let n = k.space().state_count();
    assert!(n <= 4, "vertex oracle is for tiny spaces");
    let mut equalities = vec![(vec![Rational::one(); n], Rational::one())];
    let mut inequalities: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for c in k.constraints() {
        let row = (c.coefficients().to_vec(), c.rhs().clone());
        match c.relation() {
            Relation::Eq => equalities.push(row),
            Relation::Le | Relation::Ge => inequalities.push(row),
        }
    }
    for j in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[j] = Rational::one();
        inequalities.push((e, Rational::zero()));
    }
    let feasible = |x: &[Rational]| {
        x.iter().all(|v| !v.is_negative())
            && dot(x, &vec![Rational::one(); n]) == Rational::one()
            && k.constraints()
                .iter()
                .all(|c| c.relation().holds(&dot(c.coefficients(), x), c.rhs()))
    };
    let mut out: Vec<Vec<Rational>> = Vec::new();
    let m = inequalities.len();
    for mask in 0u32..(1 << m) {
        if mask.count_ones() as usize > n {
            continue;
        }
        let mut system = equalities.clone();
        system.extend(
            (0..m)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| inequalities[i].clone()),
        );
        if let Some(x) = solve_unique(&system, n) {
            if feasible(&x) && !out.contains(&x) {
                out.push(x);
            }
        }
    }
    out
}

/// Extreme value of `objective` over the vertex list; `None` if empty.
pub fn vertex_optimum(
    verts: &[Vec<Rational>],
    objective: &[Rational],
    maximize: bool,
) -> Option<Rational> {
    let values = verts.iter().map(|v| dot(v, objective));
    if maximize {
        values.max()
    } else {
        values.min()
    }
}

/// Every point of the three-state simplex with coordinates in multiples of
/// `1/steps`.
pub fn grid3(steps: i64) -> Vec<[Rational; 3]> {
    let mut out = Vec::new();
    for i in 0..=steps {
        for j in 0..=(steps - i) {
            let k = steps - i - j;
            out.push([ratio(i, steps), ratio(j, steps), ratio(k, steps)]);
        }
    }
    out
}

/// Marginal of a joint mass vector on `block`, by direct summation over the
/// decoded states.
pub fn marginal(space: &VariableSpace, mass: &[Rational], block: &VarSet) -> Vec<Rational> {
    let sub = space.subspace(block).unwrap();
    let positions: Vec<usize> = sub
        .names()
        .iter()
        .map(|name| space.variable_index(name).unwrap())
        .collect();
    let mut out = vec![Rational::zero(); sub.state_count()];
    for (index, m) in mass.iter().enumerate() {
        let values = space.decode(index);
        let cell: Vec<usize> = positions.iter().map(|&p| values[p]).collect();
        out[sub.encode(&cell)] += m;
    }
    out
}

pub fn marginal_f64(space: &VariableSpace, mass: &[f64], block: &VarSet) -> Vec<f64> {
    let sub = space.subspace(block).unwrap();
    let positions: Vec<usize> = sub
        .names()
        .iter()
        .map(|name| space.variable_index(name).unwrap())
        .collect();
    let mut out = vec![0.0; sub.state_count()];
    for (index, m) in mass.iter().enumerate() {
        let values = space.decode(index);
        let cell: Vec<usize> = positions.iter().map(|&p| values[p]).collect();
        out[sub.encode(&cell)] += m;
    }
    out
}

pub fn entropy_nats(mass: &[f64]) -> f64 {
    mass.iter()
        .filter(|&&m| m > 0.0)
        .map(|&m| -m * m.ln())
        .sum()
}

/// Binary variables named `V0`, `V1`, ...
pub fn binary_space(count: usize) -> VariableSpace {
    VariableSpace::from_pairs((0..count).map(|i| (format!("V{i}"), vec!["0", "1"]))).unwrap()
}

pub fn random_rational(rng: &mut StdRng, lo: i64, hi: i64, denom: i64) -> Rational {
    ratio(rng.random_range(lo * denom..=hi * denom), denom)
}

/// A random distribution with small integer weights; some cells may be zero.
pub fn random_distribution(rng: &mut StdRng, space: &VariableSpace) -> Distribution {
    let n = space.state_count();
    loop {
        let weights: Vec<i64> = (0..n)
            .map(|_| {
                if rng.random_bool(0.2) {
                    0
                } else {
                    rng.random_range(1..=9)
                }
            })
            .collect();
        let total: i64 = weights.iter().sum();
        if total > 0 {
            let mass = weights.iter().map(|&w| ratio(w, total)).collect();
            return Distribution::new(space.clone(), mass).unwrap();
        }
    }
}

pub fn strictly_positive_distribution(rng: &mut StdRng, space: &VariableSpace) -> Distribution {
    let weights: Vec<i64> = (0..space.state_count())
        .map(|_| rng.random_range(1..=9))
        .collect();
    let total: i64 = weights.iter().sum();
    Distribution::new(
        space.clone(),
        weights.iter().map(|&w| ratio(w, total)).collect(),
    )
    .unwrap()
}

pub fn random_utilities(rng: &mut StdRng, actions: usize, states: usize) -> Vec<Vec<Rational>> {
    (0..actions)
        .map(|_| {
            (0..states)
                .map(|_| int(rng.random_range(-20..=20)))
                .collect()
        })
        .collect()
}

/// A random antichain over the named variables: random nonempty subsets with
/// absorbed ones removed.
pub fn random_model(
    rng: &mut StdRng,
    names: &[String],
    max_blocks: usize,
    max_size: usize,
) -> Model {
    let count = rng.random_range(1..=max_blocks);
    let mut blocks: Vec<VarSet> = Vec::new();
    for _ in 0..count {
        let size = rng.random_range(1..=max_size.min(names.len()));
        let mut block = VarSet::new();
        while block.len() < size {
            block.insert(names[rng.random_range(0..names.len())].clone());
        }
        blocks.push(block);
    }
    let maximal: Vec<VarSet> = blocks
        .iter()
        .enumerate()
        .filter(|(i, b)| {
            !blocks
                .iter()
                .enumerate()
                .any(|(j, c)| (b.is_subset(c) && b != &c) || (b == &c && j < *i))
        })
        .map(|(_, b)| b.clone())
        .collect();
    Model::new(maximal).unwrap()
}

/// Splits each block of `coarse` into random nonempty pieces, giving a model
/// that refines it.
pub fn random_refinement(rng: &mut StdRng, coarse: &Model) -> Model {
    let mut pieces: Vec<VarSet> = Vec::new();
    for block in coarse.blocks() {
        let vars: Vec<&String> = block.iter().collect();
        let parts = rng.random_range(1..=vars.len());
        let mut split = vec![VarSet::new(); parts];
        for (i, v) in vars.iter().enumerate() {
            let slot = if i < parts {
                i
            } else {
                rng.random_range(0..parts)
            };
            split[slot].insert((*v).clone());
        }
        if rng.random_bool(0.3) {
            // Occasionally drop a variable entirely; the result still refines.
            let slot = rng.random_range(0..parts);
            if split[slot].len() > 1 {
                let first = split[slot].iter().next().unwrap().clone();
                split[slot].remove(&first);
            }
        }
        pieces.extend(split);
    }
    let maximal: Vec<VarSet> = pieces
        .iter()
        .enumerate()
        .filter(|(i, b)| {
            !pieces
                .iter()
                .enumerate()
                .any(|(j, c)| (b.is_subset(c) && b != &c) || (b == &c && j < *i))
        })
        .map(|(_, b)| b.clone())
        .collect();
    Model::new(maximal).unwrap()
}

/// Tables of `p` projected onto every block of `model`, in block order.
pub fn tables_of(p: &Distribution, model: &Model) -> Vec<Distribution> {
    model
        .blocks()
        .iter()
        .map(|b| p.project(b).unwrap())
        .collect()
}

/// Whether the hypergraph of `model` is acyclic: repeatedly delete variables
/// found in a single block and blocks contained in another block; acyclic
/// models vanish entirely.
pub fn is_acyclic(model: &Model) -> bool {
    let mut blocks: Vec<VarSet> = model.blocks().to_vec();
    loop {
        let mut changed = false;
        let all: Vec<String> = blocks.iter().flatten().cloned().collect();
        for v in &all {
            let holders: Vec<usize> = (0..blocks.len())
                .filter(|&i| blocks[i].contains(v))
                .collect();
            if holders.len() == 1 {
                blocks[holders[0]].remove(v);
                changed = true;
            }
        }
        blocks.retain(|b| !b.is_empty());
        if let Some(i) = (0..blocks.len())
            .find(|&i| (0..blocks.len()).any(|j| j != i && blocks[i].is_subset(&blocks[j])))
        {
            blocks.remove(i);
            changed = true;
        }
        if !changed {
            return blocks.is_empty();
        }
    }
}
