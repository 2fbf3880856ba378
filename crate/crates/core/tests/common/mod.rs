//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use microlab_core::metabolic::{build_model, MetabolicModel, Metabolite, Reaction};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Maximum of `c·v` over `{S v = 0, l ≤ v ≤ u}` by enumerating every basic
/// solution: each variable is pinned to a bound or left free, and the free
/// block must have full column rank. `None` when no vertex is feasible.
pub fn vertex_enumeration_max(
    s: &[Vec<f64>],
    lower: &[f64],
    upper: &[f64],
    c: &[f64],
) -> Option<f64> {
    let m = s.len();
    let n = lower.len();
    let mut best: Option<f64> = None;
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut state = Vec::with_capacity(n);
        let mut k = code;
        for _ in 0..n {
            state.push(k % 3);
            k /= 3;
        }
        let free: Vec<usize> = (0..n).filter(|&j| state[j] == 0).collect();
        let mut v = vec![0.0; n];
        for j in 0..n {
            match state[j] {
                1 => v[j] = lower[j],
                2 => v[j] = upper[j],
                _ => {}
            }
        }
        // S_F v_F = -S_fixed v_fixed
        let mut aug: Vec<Vec<f64>> = (0..m)
            .map(|i| {
                let mut row: Vec<f64> = free.iter().map(|&j| s[i][j]).collect();
                let rhs: f64 = (0..n)
                    .filter(|&j| state[j] != 0)
                    .map(|j| -s[i][j] * v[j])
                    .sum();
                row.push(rhs);
                row
            })
            .collect();
        let Some(sol) = solve_full_rank(&mut aug, free.len()) else {
            continue;
        };
        for (idx, &j) in free.iter().enumerate() {
            v[j] = sol[idx];
        }
        if (0..n).all(|j| v[j] >= lower[j] - 1e-9 && v[j] <= upper[j] + 1e-9) {
            let obj: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
            best = Some(best.map_or(obj, |b: f64| b.max(obj)));
        }
    }
    best
}

/// Gaussian elimination with partial pivoting; returns the unique solution
/// when the `rows × cols` system has rank `cols` and is consistent.
fn solve_full_rank(aug: &mut [Vec<f64>], cols: usize) -> Option<Vec<f64>> {
    let rows = aug.len();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..cols {
        let best =
            (pivot_row..rows).max_by(|&a, &b| aug[a][col].abs().total_cmp(&aug[b][col].abs()))?;
        if aug[best][col].abs() < 1e-10 {
            return None;
        }
        aug.swap(pivot_row, best);
        for r in 0..rows {
            if r != pivot_row {
                let f = aug[r][col] / aug[pivot_row][col];
                let pivot = aug[pivot_row].clone();
                for (dst, src) in aug[r][col..=cols].iter_mut().zip(&pivot[col..=cols]) {
                    *dst -= f * src;
                }
            }
        }
        pivots.push(pivot_row);
        pivot_row += 1;
    }
    if aug[pivot_row..].iter().any(|row| row[cols].abs() > 1e-9) {
        return None;
    }
    Some(
        (0..cols)
            .map(|c| aug[pivots[c]][cols] / aug[pivots[c]][c])
            .collect(),
    )
}

/// Random bounded network with up to 5 metabolites and 6 reactions.
pub fn random_model(rng: &mut ChaCha8Rng) -> MetabolicModel<f64> {
    let m = rng.gen_range(1..=5);
    let n = rng.gen_range(1..=6);
    let mets: Vec<Metabolite> = (0..m)
        .map(|i| Metabolite::new(format!("M{i}"), format!("M{i}"), false))
        .collect();
    let mut reactions = Vec::with_capacity(n);
    for j in 0..n {
        let mut stoich = Vec::new();
        for i in 0..m {
            if rng.gen_bool(0.5) {
                let coef = loop {
                    let c =
                        rng.gen_range(-3..=3) as f64 * if rng.gen_bool(0.3) { 0.5 } else { 1.0 };
                    if c != 0.0 {
                        break c;
                    }
                };
                stoich.push((format!("M{i}"), coef));
            }
        }
        if stoich.is_empty() {
            let i = rng.gen_range(0..m);
            stoich.push((format!("M{i}"), if rng.gen_bool(0.5) { 1.0 } else { -1.0 }));
        }
        let (lb, ub) = match rng.gen_range(0..10) {
            0 => {
                let lb = rng.gen_range(0.5..3.0);
                (lb, lb + rng.gen_range(0.0..5.0))
            }
            1..=4 => (-rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)),
            _ => (0.0, rng.gen_range(0.0..10.0)),
        };
        let mut r = Reaction {
            id: format!("R{j}"),
            stoichiometry: stoich.into_iter().collect(),
            lower_bound: lb,
            upper_bound: ub,
            objective_coefficient: 0.0,
        };
        if rng.gen_bool(0.6) {
            r.objective_coefficient = rng.gen_range(-1.0..1.0);
        }
        reactions.push(r);
    }
    if reactions.iter().all(|r| r.objective_coefficient == 0.0) {
        let j = rng.gen_range(0..n);
        reactions[j].objective_coefficient = 1.0;
    }
    build_model(mets, reactions, "Random_network_model").expect("generator emits valid models")
}

pub fn dense(model: &MetabolicModel<f64>) -> Vec<Vec<f64>> {
    let s = model.stoichiometric_matrix();
    (0..s.height()).map(|i| s.row(i).to_vec()).collect()
}

pub fn oracle_objective(model: &MetabolicModel<f64>) -> Option<f64> {
    let lower: Vec<f64> = model.reactions().iter().map(|r| r.lower_bound).collect();
    let upper: Vec<f64> = model.reactions().iter().map(|r| r.upper_bound).collect();
    let c: Vec<f64> = model
        .reactions()
        .iter()
        .map(|r| r.objective_coefficient)
        .collect();
    vertex_enumeration_max(&dense(model), &lower, &upper, &c)
}

pub fn max_residual(model: &MetabolicModel<f64>, v: &[f64]) -> f64 {
    dense(model)
        .iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum::<f64>().abs())
        .fold(0.0, f64::max)
}

/// Two glucose fermenters on a small dish. Species 1 secretes acetate,
/// species 2 formate; glucose is only ever taken up.
pub fn two_species_config(
    seed: u64,
    width: usize,
    height: usize,
    steps: usize,
) -> microlab_core::arena::SimConfig {
    let model = |name: &str, product: &str, product_name: &str| {
        serde_json::json!({
            "name": name,
            "metabolites": [
                {"id": "glc_e", "name": "Glucose", "external": true},
                {"id": product, "name": product_name, "external": true},
                {"id": "atp_c", "name": "ATP", "external": false}
            ],
            "reactions": [
                {"id": "EX_glc_e", "stoichiometry": {"glc_e": -1.0}, "lower_bound": -1000.0, "upper_bound": 0.0},
                {"id": "EX_prod", "stoichiometry": {product: -1.0}, "lower_bound": 0.0, "upper_bound": 1000.0},
                {"id": "FERM", "stoichiometry": {"glc_e": -1.0, "atp_c": 2.0, product: 2.0}, "lower_bound": 0.0, "upper_bound": 1000.0},
                {"id": "BIO", "stoichiometry": {"atp_c": -40.0}, "lower_bound": 0.0, "upper_bound": 1000.0, "objective_coefficient": 1.0}
            ]
        })
    };
    let config = serde_json::json!({
        "width": width,
        "height": height,
        "steps": steps,
        "seed": seed,
        "units": {"cell_volume_l": 1e-11, "gdw_per_fg": 1e-15},
        "substances": [
            {"name": "Glucose", "diffusivity": 1.0, "initial": {"gradient": {"from": 8.0, "to": 2.0, "axis": "x"}}},
            {"name": "Acetate", "diffusivity": 1.2, "initial": {"uniform": 0.0}},
            {"name": "Formate", "diffusivity": 1.4, "initial": {"uniform": 0.0}}
        ],
        "species": [
            {"name": "Escherichia_coli_K12", "model": model("Escherichia_coli_K12", "ac_e", "Acetate"),
             "kinetics": {"EX_glc_e": {"vmax": 10.0, "km": 0.5}}, "color": "#E41A1C", "count": 4, "initial_biomass": 1000.0},
            {"name": "Blautia_producta_DSM2950", "model": model("Blautia_producta_DSM2950", "for_e", "Formate"),
             "kinetics": {"EX_glc_e": {"vmax": 6.0, "km": 1.0}}, "color": "#377EB8", "count": 3, "initial_biomass": 800.0}
        ]
    });
    microlab_core::arena::SimConfig::from_json(&config.to_string()).expect("valid test config")
}
