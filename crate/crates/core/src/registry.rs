//! Name-keyed registry of closed-form AoI models.
//!
//! Front ends pick a model by its key (`"1"`, `"inf"`) and get back a
//! `Box<dyn AoiModel>`; new system sizes only need a factory registered here.

use std::sync::OnceLock;

use crate::analytic::{InfiniteQueue, SingleBuffer};
use crate::error::{AoiError, Result};
use crate::model::{AoiModel, SystemSize};
use crate::params::ModelParams;

pub type ModelFactory = fn(ModelParams) -> Result<Box<dyn AoiModel>>;

#[derive(Debug, Clone)]
pub struct ModelEntry {
    pub name: &'static str,
    pub size: SystemSize,
    pub description: &'static str,
    factory: ModelFactory,
}

impl ModelEntry {
    pub fn new(name: &'static str, size: SystemSize, description: &'static str, factory: ModelFactory) -> Self {
        Self {
            name,
            size,
            description,
            factory,
        }
    }

    pub fn build(&self, params: ModelParams) -> Result<Box<dyn AoiModel>> {
        (self.factory)(params)
    }
}

#[derive(Debug, Clone, Default)]
pub struct ModelRegistry {
    entries: Vec<ModelEntry>,
}

fn single_buffer(params: ModelParams) -> Result<Box<dyn AoiModel>> {
    Ok(Box::new(SingleBuffer::new(params)?))
}

fn infinite_queue(params: ModelParams) -> Result<Box<dyn AoiModel>> {
    Ok(Box::new(InfiniteQueue::new(params)?))
}

impl ModelRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Registry holding the bufferless (`"1"`) and unbounded (`"inf"`) models.
    pub fn builtin() -> Self {
        let mut registry = Self::empty();
        registry
            .register(ModelEntry::new(
                SystemSize::One.key(),
                SystemSize::One,
                "Ber/Geo/1/1: bufferless, arrivals to a busy server are dropped",
                single_buffer,
            ))
            .expect("fresh registry");
        registry
            .register(ModelEntry::new(
                SystemSize::Infinite.key(),
                SystemSize::Infinite,
                "Ber/Geo/1/inf: unbounded FCFS buffer, requires p < gamma",
                infinite_queue,
            ))
            .expect("fresh registry");
        registry
    }

    /// Shared instance of [`ModelRegistry::builtin`].
    pub fn global() -> &'static ModelRegistry {
        static GLOBAL: OnceLock<ModelRegistry> = OnceLock::new();
        GLOBAL.get_or_init(ModelRegistry::builtin)
    }

    pub fn register(&mut self, entry: ModelEntry) -> Result<()> {
        if self.entries.iter().any(|e| e.name == entry.name) {
            return Err(AoiError::InvalidConfig(format!(
                "model {:?} is already registered",
                entry.name
            )));
        }
        self.entries.push(entry);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&ModelEntry> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| AoiError::UnknownModel(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.iter().map(|e| e.name)
    }

    pub fn entries(&self) -> &[ModelEntry] {
        &self.entries
    }

    pub fn build(&self, name: &str, params: ModelParams) -> Result<Box<dyn AoiModel>> {
        self.get(name)?.build(params)
    }

    pub fn build_size(&self, size: SystemSize, params: ModelParams) -> Result<Box<dyn AoiModel>> {
        self.entries
            .iter()
            .find(|e| e.size == size)
            .ok_or_else(|| AoiError::UnknownModel(size.key().to_string()))?
            .build(params)
    }
}

/// Builds the closed-form model for `size` from the global registry.
pub fn model_for(size: SystemSize, params: ModelParams) -> Result<Box<dyn AoiModel>> {
    ModelRegistry::global().build_size(size, params)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_lookup() {
        let registry = ModelRegistry::builtin();
        assert_eq!(registry.names().collect::<Vec<_>>(), vec!["1", "inf"]);
        let params = ModelParams::new(0.2, 0.5).unwrap();
        let inf = registry.build("inf", params).unwrap();
        assert_eq!(inf.size(), SystemSize::Infinite);
        assert!((inf.mean() - 6.266_666_666_666_667).abs() < 1e-12);
        let one = registry.build("1", params).unwrap();
        assert!((one.mean() - 6.333_333_333_333_333).abs() < 1e-12);
        assert!(matches!(registry.build("3", params), Err(AoiError::UnknownModel(_))));
    }

    #[test]
    fn duplicate_names_rejected() {
        let mut registry = ModelRegistry::builtin();
        let dup = registry.get("inf").unwrap().clone();
        assert!(registry.register(dup).is_err());
    }

    #[test]
    fn factory_errors_propagate() {
        let unstable = ModelParams::new(0.6, 0.5).unwrap();
        assert!(matches!(model_for(SystemSize::Infinite, unstable), Err(AoiError::Unstable { .. })));
        assert!(model_for(SystemSize::One, unstable).is_ok());
    }
}
