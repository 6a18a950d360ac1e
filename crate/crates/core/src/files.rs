//! On-disk documents: space descriptions, subset entries, point lists.
//!
//! A space file is either a bare constructor object or a wrapper with a
//! `space` field and an optional bundled `subset`. Subsets name a builder
//! or list explicit points.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaces::{Constructor, Point, Space};
use crate::subsets::{build_subset, SubsetNet, SubsetOracle};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SubsetEntry {
    /// Explicit finite subset; treated as exact, with zero sample gap.
    List { points: Vec<Point> },
    /// A builder string such as "equator" or "helix:0.5".
    Named { name: String },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpaceFile {
    #[serde(alias = "space")]
    pub constructor: Constructor,
    /// Curvature lower bound; optional on read, validated against the
    /// bound the constructor mandates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subset: Option<SubsetEntry>,
}

/// Read a space file, accepting both the wrapper form (fields
/// `constructor` — alias `space` — plus optional `k` and `subset`) and a
/// bare constructor object.
pub fn load_space_file(path: &Path) -> Result<SpaceFile> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    if value.get("constructor").is_some() || value.get("space").is_some() {
        Ok(serde_json::from_value(value)?)
    } else {
        let constructor: Constructor = serde_json::from_value(value)?;
        Ok(SpaceFile { constructor, k: None, subset: None })
    }
}

/// Load and validate the space described by a file. A `k` field in the
/// file must match the bound the constructor mandates.
pub fn load_space(path: &Path) -> Result<(Space, Option<SubsetEntry>)> {
    let file = load_space_file(path)?;
    let space = Space::new(file.constructor)?;
    if let Some(k) = file.k {
        let mandated = space.declared_k();
        if (k - mandated).abs() > 1e-12 {
            return Err(Error::InvalidSpec(format!(
                "file declares k = {k}, but this constructor mandates k = {mandated}"
            )));
        }
    }
    Ok((space, file.subset))
}

pub fn save_space_file(path: &Path, file: &SpaceFile) -> Result<()> {
    let mut text = serde_json::to_string_pretty(file)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Realize a subset entry against a space.
pub fn resolve_subset(space: &Space, entry: &SubsetEntry, res: f64) -> Result<SubsetNet> {
    match entry {
        SubsetEntry::Named { name } => build_subset(space, name, res),
        SubsetEntry::List { points } => {
            if points.is_empty() {
                return Err(Error::InvalidSpec("listed subset has no points".into()));
            }
            for p in points {
                space.validate_point(p)?;
            }
            Ok(SubsetNet {
                label: format!("listed points ({})", points.len()),
                points: points.clone(),
                sample_mesh: 0.0,
                oracle: Some(SubsetOracle::FiniteSet(points.clone())),
            })
        }
    }
}

/// Interpret a `--subset` argument: an existing file wins, anything else
/// is a builder string. A subset file may be a subset entry, a bare point
/// array, or a space file with a bundled subset.
pub fn subset_from_arg(space: &Space, arg: &str, res: f64) -> Result<SubsetNet> {
    let path = Path::new(arg);
    if !path.exists() {
        return build_subset(space, arg, res);
    }
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let entry = if value.is_array() {
        SubsetEntry::List { points: serde_json::from_value(value)? }
    } else if value.get("type").is_some() {
        serde_json::from_value(value)?
    } else if let Some(sub) = value.get("subset") {
        serde_json::from_value(sub.clone())?
    } else {
        return Err(Error::InvalidSpec(format!(
            "{} holds neither a subset entry nor a point array",
            path.display()
        )));
    };
    resolve_subset(space, &entry, res)
}

/// Parse a point given inline as JSON.
pub fn parse_point(text: &str) -> Result<Point> {
    Ok(serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn scratch(name: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join(format!("qcgeo-files-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        dir.join(name)
    }

    #[test]
    fn wrapper_and_bare_forms_load_the_same_space() {
        let cons = Constructor::Suspension {
            base: Box::new(Constructor::Circle { perimeter: 2.0 * PI }),
        };
        let p1 = scratch("wrapped.json");
        save_space_file(
            &p1,
            &SpaceFile {
                constructor: cons.clone(),
                k: Some(1.0),
                subset: Some(SubsetEntry::Named { name: "equator".into() }),
            },
        )
        .unwrap();
        let (s1, subset) = load_space(&p1).unwrap();
        let entry = subset.unwrap();
        let f = resolve_subset(&s1, &entry, 0.1).unwrap();
        assert!(f.points.len() > 10);

        let p2 = scratch("bare.json");
        std::fs::write(&p2, serde_json::to_string(&cons).unwrap()).unwrap();
        let (s2, none) = load_space(&p2).unwrap();
        assert!(none.is_none());
        assert_eq!(s1.label(), s2.label());
    }

    #[test]
    fn listed_points_become_an_exact_subset() {
        let space = Space::new(Constructor::Sphere { dim: 2 }).unwrap();
        let entry = SubsetEntry::List {
            points: vec![
                Point::Sphere { coords: vec![0.0, 0.0, 1.0] },
                Point::Sphere { coords: vec![0.0, 0.0, -1.0] },
            ],
        };
        let f = resolve_subset(&space, &entry, 0.1).unwrap();
        assert_eq!(f.points.len(), 2);
        assert_eq!(f.sample_mesh, 0.0);

        let off = SubsetEntry::List {
            points: vec![Point::Sphere { coords: vec![0.0, 0.0, 2.0] }],
        };
        assert!(resolve_subset(&space, &off, 0.1).is_err());
    }

    #[test]
    fn subset_argument_accepts_files_and_builder_strings() {
        let space = Space::new(Constructor::Sphere { dim: 2 }).unwrap();
        let by_name = subset_from_arg(&space, "poles", 0.1).unwrap();
        assert_eq!(by_name.points.len(), 2);

        let path = scratch("points.json");
        std::fs::write(&path, r#"[{"kind": "sphere", "coords": [1.0, 0.0, 0.0]}]"#).unwrap();
        let by_file = subset_from_arg(&space, path.to_str().unwrap(), 0.1).unwrap();
        assert_eq!(by_file.points.len(), 1);

        assert!(subset_from_arg(&space, "no-such-builder", 0.1).is_err());
    }
}
