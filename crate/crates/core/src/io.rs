//! Group input files: `{"name": .., "degree": n, "generators": [[images], ..]}`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::perm::Permutation;

pub const MAX_DEGREE: usize = 64;
pub const MAX_GENERATORS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<Vec<u32>>,
}

impl GroupFile {
    pub fn from_group(g: &FiniteGroup) -> Self {
        GroupFile {
            name: g.name().to_string(),
            degree: g.degree(),
            generators: g.generators().iter().map(|p| p.images().to_vec()).collect(),
        }
    }

    pub fn build(&self) -> Result<FiniteGroup> {
        if self.degree == 0 || self.degree > MAX_DEGREE {
            return Err(Error::GroupFile(format!("degree {} outside 1..={MAX_DEGREE}", self.degree)));
        }
        if self.generators.len() > MAX_GENERATORS {
            return Err(Error::GroupFile(format!("{} generators, at most {MAX_GENERATORS} allowed", self.generators.len())));
        }
        let gens = self
            .generators
            .iter()
            .map(|images| {
                if images.len() != self.degree {
                    return Err(Error::DegreeMismatch { expected: self.degree, found: images.len() });
                }
                Permutation::from_images(images.clone())
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteGroup::from_generators(self.name.clone(), self.degree, gens)
    }
}

pub fn parse_group(json: &str) -> Result<FiniteGroup> {
    let file: GroupFile = serde_json::from_str(json).map_err(|e| Error::GroupFile(e.to_string()))?;
    file.build()
}

pub fn load_group(path: &Path) -> Result<FiniteGroup> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::GroupFile(format!("{}: {e}", path.display())))?;
    parse_group(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn round_trip() {
        let g = catalog::build("sl3_2").unwrap();
        let json = serde_json::to_string(&GroupFile::from_group(&g)).unwrap();
        let h = parse_group(&json).unwrap();
        assert_eq!(h.order(), 168);
        assert_eq!(h.elements(), g.elements());
    }

    #[test]
    fn rejects_bad_files() {
        assert!(parse_group(r#"{"name":"x","degree":3,"generators":[[0,1]]}"#).is_err());
        assert!(parse_group(r#"{"name":"x","degree":3,"generators":[[0,0,1]]}"#).is_err());
        assert!(parse_group(r#"{"name":"x","degree":65,"generators":[]}"#).is_err());
        assert!(parse_group(r#"{"name":"x","degree":2,"generators":[[1,0]],"extra":1}"#).is_err());
        let many = vec![vec![0u32, 1]; 17];
        let file = GroupFile { name: "x".into(), degree: 2, generators: many };
        assert!(file.build().is_err());
        assert_eq!(parse_group(r#"{"name":"c2","degree":2,"generators":[[1,0]]}"#).unwrap().order(), 2);
    }
}
