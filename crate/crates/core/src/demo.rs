//! Synthetic eight-species gut community used as the bundled demo dataset.
//!
//! The models are small fermenters, not genome-scale reconstructions: each
//! species turns glucose into ATP plus a characteristic mix of fermentation
//! products, and grows on ATP and ammonium.

use std::collections::BTreeMap;

use crate::arena::{
    run_simulation, ArenaError, Axis, InitialConcentration, ModelSource, SimConfig,
    SimulationTrace, SpeciesConfig, SubstanceConfig, UnitParams,
};
use crate::dataset::{
    export_population, export_substance, select_fluctuating_substances, FluxMode,
};
use crate::metabolic::{Metabolite, ModelFile, Reaction, UptakeKinetics};
use crate::viz::species_color;

pub const DEMO_POPULATION: &str = include_str!("../resources/demo/population_dataset.csv");
pub const DEMO_SUBSTANCE: &str = include_str!("../resources/demo/substance_dataset.csv");
pub const DEMO_CONFIG: &str = include_str!("../resources/demo/sihumi_config.json");

/// Substances exported to the demo files (the six most fluctuating).
pub const DEMO_EXPORTED: usize = 6;

const SUBSTANCES: [(&str, &str, f64); 8] = [
    ("glc_e", "Glucose", 1.0),
    ("nh4_e", "Ammonium", 1.5),
    ("ac_e", "Acetate", 1.2),
    ("lac_e", "Lactate", 1.0),
    ("but_e", "Butyrate", 0.9),
    ("for_e", "Formate", 1.4),
    ("succ_e", "Succinate", 0.8),
    ("etoh_e", "Ethanol", 1.6),
];

struct Fermenter {
    name: &'static str,
    atp_yield: f64,
    products: &'static [(&'static str, f64)],
    glucose_vmax: f64,
    glucose_km: f64,
    /// Lactate-to-butyrate conversion, for lactate utilizers.
    uses_lactate: bool,
}

const COMMUNITY: [Fermenter; 8] = [
    Fermenter {
        name: "Anaerostipes_caccae_DSM14662",
        atp_yield: 2.0,
        products: &[("but_e", 0.5), ("ac_e", 0.5), ("for_e", 1.0)],
        glucose_vmax: 6.0,
        glucose_km: 1.5,
        uses_lactate: true,
    },
    Fermenter {
        name: "Bacteroides_thetaiotaomicron_VPI5482",
        atp_yield: 3.0,
        products: &[("succ_e", 1.0), ("ac_e", 1.0)],
        glucose_vmax: 8.0,
        glucose_km: 0.8,
        uses_lactate: false,
    },
    Fermenter {
        name: "Bifidobacterium_longum_NCC2705",
        atp_yield: 2.5,
        products: &[("ac_e", 1.5), ("lac_e", 1.0)],
        glucose_vmax: 9.0,
        glucose_km: 1.0,
        uses_lactate: false,
    },
    Fermenter {
        name: "Blautia_producta_DSM2950",
        atp_yield: 2.0,
        products: &[("ac_e", 2.0), ("for_e", 0.5)],
        glucose_vmax: 5.0,
        glucose_km: 1.2,
        uses_lactate: false,
    },
    Fermenter {
        name: "Clostridium_butyricum_DSM10702",
        atp_yield: 3.0,
        products: &[("but_e", 0.8), ("ac_e", 0.4), ("for_e", 0.4)],
        glucose_vmax: 7.0,
        glucose_km: 1.0,
        uses_lactate: false,
    },
    Fermenter {
        name: "Clostridium_ramosum_VPI0427",
        atp_yield: 2.0,
        products: &[("lac_e", 1.0), ("ac_e", 0.5), ("for_e", 0.5)],
        glucose_vmax: 6.0,
        glucose_km: 0.6,
        uses_lactate: false,
    },
    Fermenter {
        name: "Escherichia_coli_K12",
        atp_yield: 3.0,
        products: &[
            ("ac_e", 0.8),
            ("etoh_e", 0.8),
            ("for_e", 1.6),
            ("succ_e", 0.2),
        ],
        glucose_vmax: 10.0,
        glucose_km: 0.5,
        uses_lactate: false,
    },
    Fermenter {
        name: "Lactobacillus_plantarum_WCFS1",
        atp_yield: 2.0,
        products: &[("lac_e", 2.0)],
        glucose_vmax: 10.0,
        glucose_km: 0.7,
        uses_lactate: false,
    },
];

/// ATP per unit of biomass objective flux.
const ATP_PER_BIOMASS: f64 = 40.0;
const NH4_PER_BIOMASS: f64 = 0.5;

fn substance_name(id: &str) -> &'static str {
    SUBSTANCES
        .iter()
        .find(|s| s.0 == id)
        .map(|s| s.1)
        .expect("known substance id")
}

fn fermenter_model(f: &Fermenter) -> ModelFile<f64> {
    let mut exchanged: Vec<&str> = vec!["glc_e", "nh4_e"];
    for (p, _) in f.products {
        exchanged.push(p);
    }
    if f.uses_lactate {
        for id in ["lac_e", "but_e"] {
            if !exchanged.contains(&id) {
                exchanged.push(id);
            }
        }
    }

    let mut metabolites: Vec<Metabolite> = exchanged
        .iter()
        .map(|id| Metabolite::new(*id, substance_name(id), true))
        .collect();
    metabolites.push(Metabolite::new("atp_c", "ATP", false));

    let mut reactions = Vec::new();
    for id in &exchanged {
        let (lb, ub) = match *id {
            "glc_e" | "nh4_e" => (-1000.0, 0.0),
            "lac_e" if f.uses_lactate => (-1000.0, 1000.0),
            _ => (0.0, 1000.0),
        };
        reactions.push(Reaction::new(format!("EX_{id}"), [(*id, -1.0)], lb, ub));
    }

    let mut glycolysis: Vec<(&str, f64)> = vec![("glc_e", -1.0), ("atp_c", f.atp_yield)];
    glycolysis.extend(f.products.iter().copied());
    reactions.push(Reaction::new("FERM", glycolysis, 0.0, 1000.0));
    if f.uses_lactate {
        reactions.push(Reaction::new(
            "LACBUT",
            [("lac_e", -2.0), ("but_e", 1.0), ("atp_c", 1.0)],
            0.0,
            1000.0,
        ));
    }
    reactions.push(
        Reaction::new(
            "BIO",
            [("atp_c", -ATP_PER_BIOMASS), ("nh4_e", -NH4_PER_BIOMASS)],
            0.0,
            1000.0,
        )
        .with_objective(1.0),
    );

    ModelFile {
        name: f.name.to_string(),
        metabolites,
        reactions,
    }
}

/// The demo community on a 20×20 dish with a glucose gradient along x.
pub fn sihumi_config() -> SimConfig {
    let substances = SUBSTANCES
        .iter()
        .map(|&(id, name, diffusivity)| SubstanceConfig {
            name: name.to_string(),
            diffusivity,
            initial: match id {
                "glc_e" => InitialConcentration::Gradient {
                    from: 12.0,
                    to: 4.0,
                    axis: Axis::X,
                },
                "nh4_e" => InitialConcentration::Uniform(0.5),
                _ => InitialConcentration::Uniform(0.0),
            },
        })
        .collect();

    let species = COMMUNITY
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let mut kinetics = BTreeMap::new();
            kinetics.insert(
                "EX_glc_e".to_string(),
                UptakeKinetics::new(f.glucose_vmax, f.glucose_km).expect("valid demo kinetics"),
            );
            kinetics.insert(
                "EX_nh4_e".to_string(),
                UptakeKinetics::new(2.0, 0.1).expect("valid demo kinetics"),
            );
            if f.uses_lactate {
                kinetics.insert(
                    "EX_lac_e".to_string(),
                    UptakeKinetics::new(8.0, 0.5).expect("valid demo kinetics"),
                );
            }
            SpeciesConfig {
                name: f.name.to_string(),
                model: ModelSource::Inline(fermenter_model(f)),
                kinetics,
                color: species_color(i as u32 + 1).to_string(),
                count: 6,
                initial_biomass: 1000.0,
            }
        })
        .collect();

    SimConfig {
        width: 20,
        height: 20,
        dt: 1.0,
        steps: 8,
        seed: 42,
        diffusion_substeps: 10,
        units: UnitParams {
            cell_volume_l: 1e-11,
            gdw_per_fg: 1e-15,
        },
        lifecycle: Default::default(),
        substances,
        species,
    }
}

/// Species names in genotype order.
pub fn species_names() -> Vec<&'static str> {
    COMMUNITY.iter().map(|f| f.name).collect()
}

pub fn demo_trace() -> Result<SimulationTrace, ArenaError> {
    let config = sihumi_config();
    run_simulation(&config, config.steps)
}

/// Population and substance file contents for `trace`, restricted to its
/// six most fluctuating substances.
pub fn dataset_texts(trace: &SimulationTrace) -> (String, String) {
    let chosen = select_fluctuating_substances(trace, DEMO_EXPORTED);
    (
        export_population(trace, &chosen, FluxMode::Computed),
        export_substance(trace, &chosen),
    )
}
