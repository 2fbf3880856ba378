use std::collections::BTreeMap;
use std::io::Cursor;
use std::sync::Arc;

use microlab_core::dataset::{import_pair, DatasetPair};
use microlab_core::demo::{DEMO_POPULATION, DEMO_SUBSTANCE};
use microlab_core::viz::{Frame, FrameAssembler, MeshMode, Outline, Selection};

fn demo_pair() -> DatasetPair {
    let out = import_pair(
        Cursor::new(DEMO_POPULATION),
        Cursor::new(DEMO_SUBSTANCE),
        "p",
        "s",
        |_| {},
    );
    out.pair.expect("bundled demo validates")
}

type Key = (u32, u32, u32, u32, u64, String);

fn multiset<I: Iterator<Item = Key>>(items: I) -> BTreeMap<Key, usize> {
    let mut m = BTreeMap::new();
    for k in items {
        *m.entry(k).or_insert(0) += 1;
    }
    m
}

#[test]
fn glyphs_are_the_records_of_that_time() {
    let pair = demo_pair();
    let a = FrameAssembler::new(Arc::new(pair.clone()));
    for t in [1, 7] {
        let frame = a.assemble(t, &Selection::default()).unwrap();
        let glyphs = multiset(frame.glyphs.iter().map(|g| {
            (
                g.x,
                g.y,
                g.genotype,
                g.phenotype,
                g.biomass.to_bits(),
                g.name.clone(),
            )
        }));
        let records = multiset(pair.population.iter().filter(|r| r.time == t).map(|r| {
            (
                r.x,
                r.y,
                r.genotype,
                r.phenotype,
                r.biomass.to_bits(),
                r.name.clone(),
            )
        }));
        assert_eq!(glyphs, records, "t = {t}");
        assert!(frame.mesh.is_none());
        assert!(frame.glyphs.iter().all(|g| g.outline == Outline::None));
    }
}

#[test]
fn recycled_buffers_give_identical_frames() {
    let a = FrameAssembler::new(Arc::new(demo_pair()));
    let substances = a.pair().substances.clone();
    let mut reused = Frame::default();
    for (i, &t) in a.times().to_vec().iter().rev().enumerate() {
        let sel = Selection {
            substance: Some(substances[i % substances.len()].clone()),
            mode: if i % 2 == 0 {
                MeshMode::Height3D
            } else {
                MeshMode::Flat2D
            },
            scheme: i % 5,
            flux_substance: Some(substances[(i + 1) % substances.len()].clone()),
        };
        a.assemble_into(t, &sel, &mut reused).unwrap();
        let fresh = a.assemble(t, &sel).unwrap();
        assert_eq!(
            serde_json::to_string(&reused).unwrap(),
            serde_json::to_string(&fresh).unwrap()
        );
    }
}

#[test]
fn flux_outlines_follow_sign_of_selected_column() {
    let pair = demo_pair();
    let a = FrameAssembler::new(Arc::new(pair.clone()));
    let s = pair.substances[0].clone();
    let frame = a
        .assemble(
            3,
            &Selection {
                flux_substance: Some(s),
                ..Selection::default()
            },
        )
        .unwrap();
    let records: Vec<_> = pair.population.iter().filter(|r| r.time == 3).collect();
    assert_eq!(records.len(), frame.glyphs.len());
    for (g, r) in frame.glyphs.iter().zip(records) {
        let want = if r.fluxes[0] > 1e-9 {
            Outline::Production
        } else if r.fluxes[0] < -1e-9 {
            Outline::Uptake
        } else {
            Outline::None
        };
        assert_eq!(g.outline, want);
    }
}
