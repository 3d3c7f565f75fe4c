use dedesym_core::{FieldElement, Rational};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

/// Collects results and prints them as text lines or one JSON document.
pub struct Out {
    json: bool,
    records: Vec<Value>,
    single: Option<Value>,
}

impl Out {
    pub fn new(json: bool) -> Self {
        Out {
            json,
            records: Vec::new(),
            single: None,
        }
    }

    /// A single result value.
    pub fn value(&mut self, j: Value, text: String) {
        if self.json {
            self.single = Some(j);
        } else {
            println!("{text}");
        }
    }

    /// One row of a multi-row result.
    pub fn record(&mut self, j: Value, text: String) {
        if self.json {
            self.records.push(j);
        } else {
            println!("{text}");
        }
    }

    pub fn finish(self) {
        if !self.json {
            return;
        }
        let doc = match self.single {
            Some(v) => v,
            None => Value::Array(self.records),
        };
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    }
}

pub fn rational_json(r: &Rational) -> Value {
    json!({
        "exact": dedesym_core::field::format_rational(r),
        "float": r.to_f64(),
        "q": 3,
    })
}

pub fn exact_json(x: &FieldElement, bits: u32) -> Value {
    json!({
        "exact": x.to_string(),
        "float": x.to_float(bits).midpoint(),
        "q": x.q(),
    })
}
