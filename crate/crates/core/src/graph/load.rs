use std::collections::HashMap;
use std::fs;
use std::path::Path;

use super::{Builder, Graph, NodeAttributes, Sex};
use crate::error::{Error, Result};

/// Parses a whitespace-separated edge list and an optional `label,sex,group`
/// attribute CSV into a validated [`Graph`].
///
/// Blank lines and lines starting with `#` are skipped. Errors carry the
/// 1-based line number of the offending input line.
pub fn load_graph(edge_text: &str, attribute_text: Option<&str>) -> Result<Graph> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut builder = Builder::new(0);

    for (k, raw) in edge_text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::load(
                line_no,
                format!("expected two labels, found {}", fields.len()),
            ));
        }
        let mut ids = [0usize; 2];
        for (slot, label) in ids.iter_mut().zip(&fields) {
            *slot = *index.entry((*label).to_string()).or_insert_with(|| {
                labels.push((*label).to_string());
                labels.len() - 1
            });
        }
        builder.grow(labels.len());
        builder
            .add(ids[0], ids[1])
            .map_err(|m| Error::load(line_no, format!("{m} `{} {}`", fields[0], fields[1])))?;
    }

    let graph = builder.finish(labels, index)?;
    match attribute_text {
        None => Ok(graph),
        Some(text) => {
            let attributes = parse_attributes(&graph, text)?;
            Ok(graph.with_attributes(attributes))
        }
    }
}

/// File-system wrapper around [`load_graph`]; errors name the file.
pub fn load_graph_files(edges: &Path, attributes: Option<&Path>) -> Result<Graph> {
    let edge_text = fs::read_to_string(edges).map_err(|e| Error::from(e).in_file(edges))?;
    let attr_text = match attributes {
        Some(p) => Some(fs::read_to_string(p).map_err(|e| Error::from(e).in_file(p))?),
        None => None,
    };
    load_graph(&edge_text, None)
        .map_err(|e| e.in_file(edges))
        .and_then(|g| match (&attr_text, attributes) {
            (Some(text), Some(p)) => {
                let attrs = parse_attributes(&g, text).map_err(|e| e.in_file(p))?;
                Ok(g.with_attributes(attrs))
            }
            _ => Ok(g),
        })
}

fn parse_attributes(graph: &Graph, text: &str) -> Result<Vec<NodeAttributes>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(text.as_bytes());

    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Error::load(1, e.to_string()))?
        .iter()
        .map(str::to_ascii_lowercase)
        .collect();
    if header != ["label", "sex", "group"] {
        return Err(Error::load(
            1,
            format!("attribute header must be `label,sex,group`, found `{}`", header.join(",")),
        ));
    }

    let mut attributes = vec![NodeAttributes::default(); graph.n()];
    let mut seen = vec![false; graph.n()];
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::load(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let label = &record[0];
        let i = graph
            .index_of(label)
            .ok_or_else(|| Error::load(line, format!("unknown label `{label}`")))?;
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::load(line, format!("duplicate attribute row for `{label}`")));
        }
        let sex = match record[1].to_ascii_uppercase().as_str() {
            "" => None,
            "M" => Some(Sex::Male),
            "F" => Some(Sex::Female),
            other => return Err(Error::load(line, format!("sex must be M, F or empty, found `{other}`"))),
        };
        let group = Some(record[2].to_string()).filter(|g| !g.is_empty());
        attributes[i] = NodeAttributes { sex, group };
    }
    Ok(attributes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_of_three() {
        let g = load_graph("a b\nb c", None).unwrap();
        assert_eq!((g.n(), g.m()), (3, 2));
        assert_eq!(g.labels(), ["a", "b", "c"]);
        assert_eq!(g.neighbors(1), [0, 2]);
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let g = load_graph("# header\n\n  x\ty  \n# mid\ny z\n", None).unwrap();
        assert_eq!(g.labels(), ["x", "y", "z"]);
    }

    #[test]
    fn self_loop_names_line() {
        let err = load_graph("a b\na a", None).unwrap_err();
        assert!(matches!(err, Error::Load { line: 2, .. }), "{err}");
        assert!(err.to_string().contains("self-loop"));
    }

    #[test]
    fn duplicate_edge_in_either_orientation() {
        let err = load_graph("a b\nb c\nb a", None).unwrap_err();
        assert!(matches!(err, Error::Load { line: 3, .. }));
        assert!(err.to_string().contains("duplicate edge"));
    }

    #[test]
    fn disconnected_is_rejected() {
        let err = load_graph("a b\nc d", None).unwrap_err();
        assert!(matches!(err, Error::Disconnected { .. }));
    }

    #[test]
    fn malformed_line() {
        assert!(matches!(
            load_graph("a b c", None),
            Err(Error::Load { line: 1, .. })
        ));
        assert!(load_graph("# nothing here\n", None).is_err());
    }

    #[test]
    fn attributes_are_attached() {
        let g = load_graph(
            "F1 M1\nM1 F2",
            Some("label,sex,group\nF1,F,north\nM1,M,\nF2,,south\n"),
        )
        .unwrap();
        let attrs = g.attributes().unwrap();
        assert_eq!(attrs[0].sex, Some(Sex::Female));
        assert_eq!(attrs[1].group, None);
        assert_eq!(attrs[2].sex, None);
        assert_eq!(attrs[2].group.as_deref(), Some("south"));
    }

    #[test]
    fn unknown_attribute_label_names_line() {
        let err = load_graph("a b", Some("label,sex,group\na,M,x\nzz,F,y\n")).unwrap_err();
        assert!(matches!(err, Error::Load { line: 3, .. }), "{err}");
        assert!(err.to_string().contains("zz"));
    }

    #[test]
    fn bad_attribute_header() {
        assert!(load_graph("a b", Some("name,sex\na,M\n")).is_err());
    }
}
