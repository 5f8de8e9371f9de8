//! Everything derived from a presentation once: structure, relations, κ and μ.

use serde::Serialize;

use crate::abelian::{AbelianStructure, GroupSpec};
use crate::acceptor::{fellow_traveller_constant, minimal_relations, Acceptor, ShortlexRules};
use crate::error::Result;
use crate::oracle::{max_elements_from_env, BallTable};

#[derive(Clone, Debug)]
pub struct GroupContext {
    spec: GroupSpec,
    structure: AbelianStructure,
    rules: ShortlexRules,
    mu: usize,
    kappa: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureSummary {
    pub generators: usize,
    pub rank: usize,
    pub torsion: Vec<i64>,
    pub mu: usize,
    pub kappa: usize,
    pub default_gamma: usize,
    pub minimal_relations: Vec<(String, String)>,
}

impl GroupContext {
    pub fn new(spec: GroupSpec) -> Result<Self> {
        let structure = AbelianStructure::derive(&spec)?;
        let mu = spec.mu();
        let relations = minimal_relations(&structure, mu as u32 + 1)?;
        let kappa = fellow_traveller_constant(&relations);
        Ok(GroupContext {
            spec,
            structure,
            rules: ShortlexRules::new(relations),
            mu,
            kappa,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(GroupSpec::parse(text)?)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn structure(&self) -> &AbelianStructure {
        &self.structure
    }

    pub fn rules(&self) -> &ShortlexRules {
        &self.rules
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn rank(&self) -> usize {
        self.structure.rank()
    }

    /// `d·κ + μ`; the acceptor's γ has to exceed this for subgraphs of diameter `d`.
    pub fn gamma_threshold(&self, diameter: usize) -> usize {
        diameter * self.kappa + self.mu
    }

    /// Smallest γ above the threshold that the acceptor construction accepts.
    pub fn default_gamma(&self, diameter: usize) -> usize {
        (self.gamma_threshold(diameter) + 1).max(self.rules.saturation() as usize)
    }

    pub fn acceptor(&self, gamma: usize) -> Result<Acceptor> {
        Acceptor::build(&self.spec.alphabet, &self.rules, self.mu, gamma)
    }

    pub fn oracle(&self, radius: usize) -> Result<BallTable> {
        BallTable::new(&self.structure, radius, max_elements_from_env())
    }

    pub fn summary(&self) -> StructureSummary {
        let alphabet = &self.spec.alphabet;
        StructureSummary {
            generators: alphabet.len(),
            rank: self.rank(),
            torsion: self.structure.invariant_factors().to_vec(),
            mu: self.mu,
            kappa: self.kappa,
            default_gamma: self.default_gamma(0),
            minimal_relations: self
                .rules
                .relations()
                .iter()
                .map(|r| (r.lhs.render(alphabet), r.rhs.render(alphabet)))
                .collect(),
        }
    }
}
