//! Browser demo: generate an instance, draw its rectangle reduction, stab
//! grid points and dispatch vertex pairs.
//!
//! [`Session`] is plain Rust; the `wasm_bindgen` wrappers only forward.

use bindispatch::format::Instance;
use bindispatch::model::{BridgeSet, ClassTree};
use bindispatch::oracle::{generate_instance, GenConfig, TreeShape};
use bindispatch::{Answer, Counters, FastDispatcher};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

pub struct Session {
    inst: Instance,
    tree: ClassTree,
    bridges: BridgeSet,
    index: FastDispatcher,
}

impl Session {
    pub fn new(text: &str) -> Result<Self, String> {
        let inst = Instance::parse(text).map_err(|e| e.to_string())?;
        let tree = inst.tree().map_err(|e| e.to_string())?;
        let bridges = inst.bridge_set(&tree).map_err(|e| e.to_string())?;
        let index = FastDispatcher::build(&tree, &bridges).map_err(|e| e.to_string())?;
        Ok(Self { inst, tree, bridges, index })
    }

    fn bridge_of(&self, rect: Option<u32>) -> Value {
        match rect {
            Some(i) => {
                let id = self.index.reduction().rects.rects[i as usize].id as usize;
                json!(self.index.split().back[id])
            }
            None => Value::Null,
        }
    }

    /// Grid size, rectangles with their bridges, and the instance summary.
    pub fn layout(&self) -> Value {
        let rs = &self.index.reduction().rects;
        let rects: Vec<Value> = rs
            .rects
            .iter()
            .enumerate()
            .map(|(i, r)| json!({ "x0": r.x_lo, "x1": r.x_hi, "y0": r.y_lo, "y1": r.y_hi, "bridge": self.bridge_of(Some(i as u32)) }))
            .collect();
        let bridges: Vec<Value> = self.bridges.iter().map(|(_, b)| json!([b.u + 1, b.v + 1])).collect();
        json!({ "grid": rs.grid, "vertices": self.tree.n(), "bridges": bridges, "rects": rects })
    }

    /// Height- and width-minimal rectangles over a grid point and the
    /// resulting answer.
    pub fn stab(&self, x: u32, y: u32) -> Value {
        let mut c = Counters::new();
        let h = self.index.height_index().smallest(x, y, &mut c);
        let w = self.index.width_index().smallest(y, x, &mut c);
        let answer = match (h, w) {
            (None, None) => Answer::NoMethod,
            (Some(a), Some(b)) if a == b => Answer::Method(self.index.split().back[self.index.reduction().rects.rects[a as usize].id as usize] as usize),
            _ => Answer::Ambiguous,
        };
        json!({ "height": self.bridge_of(h), "width": self.bridge_of(w), "answer": answer.to_string(), "ops": c.query_ops() })
    }

    /// Dispatches 1-based vertices `u`, `v`.
    pub fn dispatch(&self, u: usize, v: usize) -> Result<Value, String> {
        let n = self.tree.n();
        if !(1..=n).contains(&u) || !(1..=n).contains(&v) {
            return Err(format!("vertices are numbered 1..={n}"));
        }
        let point = self.index.point(u - 1, v - 1).map_err(|e| e.to_string())?;
        let mut c = Counters::new();
        let answer = self.index.dispatch(u - 1, v - 1, &mut c).map_err(|e| e.to_string())?;
        Ok(json!({ "answer": answer.to_string(), "point": point.map(|(x, y)| [x, y]), "ops": c.query_ops() }))
    }

    pub fn text(&self) -> String {
        self.inst.to_text()
    }
}

pub fn generate_text(seed: u64, n: usize, m: usize, shape: &str) -> Result<String, String> {
    let shape: TreeShape = shape.parse()?;
    Ok(generate_instance(&GenConfig { seed, n, m, shape, queries: 0, ..GenConfig::default() }).to_text())
}

#[wasm_bindgen]
pub fn generate(seed: u32, n: u32, m: u32, shape: &str) -> Result<String, String> {
    generate_text(seed as u64, n as usize, m as usize, shape)
}

#[wasm_bindgen]
pub struct Demo(Session);

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(constructor)]
    pub fn new(text: &str) -> Result<Demo, String> {
        Session::new(text).map(Demo)
    }

    /// JSON: `{grid, vertices, bridges, rects: [{x0, x1, y0, y1, bridge}]}`.
    pub fn layout(&self) -> String {
        self.0.layout().to_string()
    }

    /// JSON: `{height, width, answer, ops}`.
    pub fn stab(&self, x: u32, y: u32) -> String {
        self.0.stab(x, y).to_string()
    }

    /// JSON: `{answer, point, ops}`.
    pub fn dispatch(&self, u: u32, v: u32) -> Result<String, String> {
        self.0.dispatch(u as usize, v as usize).map(|v| v.to_string())
    }

    pub fn text(&self) -> String {
        self.0.text()
    }
}
