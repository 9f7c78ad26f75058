#![allow(dead_code)]

use blowdown::blowup::Configuration;
use blowdown::plumbing::{PlumbingGraph, SeifertInvariant};
use blowdown::scenario::ScenarioFile;

pub struct Built {
    pub file: ScenarioFile,
    pub start: Configuration,
    pub states: Vec<Configuration>,
}

impl Built {
    pub fn new(source: &str) -> Self {
        let file = ScenarioFile::parse(source).unwrap();
        let start = Configuration::define(&file.curve_decls(), &file.point_decls()).unwrap();
        let states = start.run_script_traced(&file.steps().unwrap()).unwrap();
        Built {
            file,
            start,
            states,
        }
    }

    pub fn last(&self) -> &Configuration {
        self.states.last().unwrap()
    }

    pub fn plumbing(&self) -> PlumbingGraph {
        let p = self.file.plumbing.as_ref().unwrap();
        let labeled: Vec<(&str, &str)> = p
            .spheres
            .iter()
            .map(|s| (s.label.as_str(), s.curve.as_str()))
            .collect();
        PlumbingGraph::extract_labeled(self.last(), &labeled).unwrap()
    }

    pub fn seifert(&self) -> SeifertInvariant {
        let g = self.plumbing();
        let p = self.file.plumbing.as_ref().unwrap();
        let legs: Option<Vec<&str>> = p
            .legs
            .as_ref()
            .map(|l| l.iter().map(String::as_str).collect());
        SeifertInvariant::from_plumbing_ordered(&g, p.center.as_deref(), legs.as_deref()).unwrap()
    }
}

/// Determinant by cofactor expansion along the first row, in i128.
pub fn cofactor_det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .filter(|&j| m[0][j] != 0)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] as i128 * cofactor_det(&minor)
        })
        .sum()
}
