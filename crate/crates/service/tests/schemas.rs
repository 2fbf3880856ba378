//! Keeps docs/schemas in step with the serialized payloads: every object
//! carries exactly the documented keys, recursively.

use std::sync::Arc;

use microlab_core::dataset::import_pair;
use microlab_core::demo::{DEMO_POPULATION, DEMO_SUBSTANCE};
use microlab_core::viz::{FrameAssembler, MeshMode, Selection};
use serde_json::Value;

fn load(name: &str) -> Value {
    let path = format!("{}/../../docs/schemas/{name}", env!("CARGO_MANIFEST_DIR"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

struct Schemas {
    frame: Value,
    mesh: Value,
}

impl Schemas {
    fn resolve<'a>(&'a self, schema: &'a Value, root: &'a Value) -> (&'a Value, &'a Value) {
        match schema.get("$ref").and_then(Value::as_str) {
            Some("mesh.schema.json") => (&self.mesh, &self.mesh),
            Some(r) => {
                let name = r.strip_prefix("#/$defs/").expect("local ref");
                (&root["$defs"][name], root)
            }
            None => (schema, root),
        }
    }

    fn check(&self, schema: &Value, root: &Value, value: &Value, at: &str) {
        let (schema, root) = self.resolve(schema, root);
        if let Some(options) = schema.get("oneOf").and_then(Value::as_array) {
            if value.is_null() {
                return;
            }
            let branch = options.iter().find(|o| o.get("type") != Some(&Value::from("null"))).unwrap();
            return self.check(branch, root, value, at);
        }
        if let Some(props) = schema.get("properties").and_then(Value::as_object) {
            let obj = value.as_object().unwrap_or_else(|| panic!("{at}: expected object"));
            let mut want: Vec<&String> = props.keys().collect();
            let mut got: Vec<&String> = obj.keys().collect();
            want.sort();
            got.sort();
            assert_eq!(got, want, "{at}");
            for (k, sub) in props {
                self.check(sub, root, &obj[k], &format!("{at}.{k}"));
            }
        }
        if let (Some(items), Some(arr)) = (schema.get("items"), value.as_array()) {
            for (i, v) in arr.iter().enumerate().take(3) {
                self.check(items, root, v, &format!("{at}[{i}]"));
            }
        }
    }
}

#[test]
fn payloads_match_documented_schemas() {
    let schemas = Schemas { frame: load("frame.schema.json"), mesh: load("mesh.schema.json") };
    let pair = import_pair(DEMO_POPULATION.as_bytes(), DEMO_SUBSTANCE.as_bytes(), "p", "s", |_| {}).pair.unwrap();
    let s = pair.substances[0].clone();
    let a = FrameAssembler::new(Arc::new(pair));

    let full = Selection {
        substance: Some(s.clone()),
        mode: MeshMode::Height3D,
        scheme: 2,
        flux_substance: Some(s.clone()),
    };
    for sel in [full, Selection::default()] {
        let frame = serde_json::to_value(a.assemble(2, &sel).unwrap()).unwrap();
        schemas.check(&schemas.frame, &schemas.frame, &frame, "frame");
    }
    let mesh = serde_json::to_value(a.mesh(&s, 2, MeshMode::Flat2D).unwrap()).unwrap();
    schemas.check(&schemas.mesh, &schemas.mesh, &mesh, "mesh");
}
