//! JSON formats for diagrams and measures.
//!
//! A diagram file holds either `{"partition": [4, 2, 2, 2]}` or
//! `{"breakpoints": [[u, v], ...]}` (Russian coordinates). Measures are
//! written as `{"atoms": [[location, weight_num, weight_den], ...]}` when
//! exact and `{"atoms": [[location, weight], ...]}` otherwise.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::diagrams::{triangle_diagram, Partition, PiecewiseLinearDiagram};
use crate::error::InputError;
use crate::scalar::Rat;
use crate::transition::AtomicMeasure;

#[derive(Clone, Debug, PartialEq)]
pub enum DiagramInput {
    Partition(Partition),
    Breakpoints(PiecewiseLinearDiagram<f64>),
}

impl DiagramInput {
    pub fn as_f64(&self) -> PiecewiseLinearDiagram<f64> {
        match self {
            DiagramInput::Partition(p) => p.profile(),
            DiagramInput::Breakpoints(d) => d.clone(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagramFile {
    partition: Option<Vec<usize>>,
    breakpoints: Option<Vec<[f64; 2]>>,
}

pub fn parse_diagram(json: &str) -> Result<DiagramInput, InputError> {
    let file: DiagramFile = serde_json::from_str(json)?;
    match (file.partition, file.breakpoints) {
        (Some(rows), None) => Ok(DiagramInput::Partition(Partition::new(rows)?)),
        (None, Some(points)) => Ok(DiagramInput::Breakpoints(PiecewiseLinearDiagram::new(
            points.into_iter().map(|[u, v]| (u, v)).collect(),
        )?)),
        _ => Err(InputError::Shape),
    }
}

/// Reads a diagram file; the word `triangle` stands for the triangle diagram.
pub fn load_diagram(source: &str) -> Result<DiagramInput, InputError> {
    if source == "triangle" {
        return Ok(DiagramInput::Breakpoints(triangle_diagram()));
    }
    let text = std::fs::read_to_string(Path::new(source)).map_err(|e| InputError::Io {
        path: source.to_string(),
        source: e,
    })?;
    parse_diagram(&text)
}

/// Parses `"4,2,2,2"`.
pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, InputError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| x.trim().parse::<T>())
        .collect::<Result<_, _>>()
        .map_err(|_| InputError::NumberList(s.to_string()))
}

fn raw(text: String) -> Box<RawValue> {
    RawValue::from_string(text).expect("integers are valid JSON")
}

/// `{"atoms": [[location, weight_num, weight_den], ...]}` with integer
/// locations written as JSON numbers of arbitrary size.
pub fn measure_json_exact(mu: &AtomicMeasure<Rat>) -> String {
    let atoms: Vec<Vec<Box<RawValue>>> = mu
        .atoms()
        .iter()
        .map(|(x, w)| {
            let loc = if x.is_integer() {
                raw(x.numer().to_string())
            } else {
                raw(format!("\"{x}\""))
            };
            vec![loc, raw(w.numer().to_string()), raw(w.denom().to_string())]
        })
        .collect();
    // serialized directly: going through `serde_json::Value` would round the
    // raw numbers to floats
    serde_json::to_string(&Atoms { atoms }).expect("serializable")
}

#[derive(Serialize)]
struct Atoms<A> {
    atoms: Vec<A>,
}

pub fn measure_json_float(mu: &AtomicMeasure<f64>) -> String {
    let atoms: Vec<[f64; 2]> = mu.atoms().iter().map(|&(x, w)| [x, w]).collect();
    serde_json::to_string(&Atoms { atoms }).expect("serializable")
}

pub fn measure_csv_exact(mu: &AtomicMeasure<Rat>) -> String {
    let mut out = String::from("location,weight_num,weight_den,weight\n");
    for (x, w) in mu.atoms() {
        out.push_str(&format!(
            "{x},{},{},{}\n",
            w.numer(),
            w.denom(),
            crate::experiments::fmt_float(crate::scalar::Scalar::to_f64(w))
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transition::{feller_measure, transition_measure};

    #[test]
    fn parses_both_shapes() {
        assert_eq!(
            parse_diagram(r#"{"partition": [2, 1]}"#).unwrap(),
            DiagramInput::Partition(Partition::new(vec![2, 1]).unwrap())
        );
        let d = parse_diagram(r#"{"breakpoints": [[-1, 1], [0, 2], [1, 1]]}"#).unwrap();
        assert_eq!(d.as_f64(), Partition::new(vec![1]).unwrap().profile());
        assert!(matches!(parse_diagram("{}"), Err(InputError::Shape)));
        assert!(matches!(
            parse_diagram(r#"{"partition": [1, 2]}"#),
            Err(InputError::Diagram(_))
        ));
        assert!(matches!(
            parse_diagram(r#"{"rows": [1]}"#),
            Err(InputError::Json(_))
        ));
    }

    #[test]
    fn exact_measure_round_trip() {
        let mu = transition_measure(&Partition::new(vec![2, 1]).unwrap().zigzag::<Rat>());
        assert_eq!(
            measure_json_exact(&mu),
            r#"{"atoms":[[-2,3,8],[0,1,4],[2,3,8]]}"#
        );
        // weights with denominators beyond 2^53 keep every digit
        let big = measure_json_exact(&feller_measure(40));
        assert!(big
            .split(|c: char| !c.is_ascii_digit())
            .any(|t| t.len() > 17));
        let parsed: serde_json::Value = serde_json::from_str(&big).unwrap();
        assert_eq!(parsed["atoms"].as_array().unwrap().len(), 41);
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list::<usize>("4,2,2,2").unwrap(), vec![4, 2, 2, 2]);
        assert_eq!(parse_list::<f64>("0.05, 0.025").unwrap(), vec![0.05, 0.025]);
        assert!(parse_list::<usize>("4,x").is_err());
        assert!(parse_list::<usize>("").unwrap().is_empty());
    }
}
