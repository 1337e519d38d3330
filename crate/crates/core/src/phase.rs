//! The six lifecycle phases and a fixed-shape map keyed by them.

use std::fmt;
use std::ops::Index;

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// One phase of the development lifecycle.
///
/// Iteration order is fixed: requirements, design, development, testing,
/// deployment, maintenance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Requirements,
    Design,
    Development,
    Testing,
    Deployment,
    Maintenance,
}

impl Phase {
    /// All phases in canonical order.
    pub const ALL: [Phase; 6] = [
        Phase::Requirements,
        Phase::Design,
        Phase::Development,
        Phase::Testing,
        Phase::Deployment,
        Phase::Maintenance,
    ];

    pub const COUNT: usize = 6;

    /// Position of this phase in [`Phase::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }

    /// Lowercase name, matching the serialized form.
    pub fn name(self) -> &'static str {
        match self {
            Phase::Requirements => "requirements",
            Phase::Design => "design",
            Phase::Development => "development",
            Phase::Testing => "testing",
            Phase::Deployment => "deployment",
            Phase::Maintenance => "maintenance",
        }
    }

    fn from_name(name: &str) -> Option<Phase> {
        Phase::ALL.iter().copied().find(|p| p.name() == name)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A value per phase, stored densely in canonical phase order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseMap<T = f64>([T; Phase::COUNT]);

impl<T> PhaseMap<T> {
    /// Builds a map by evaluating `f` on each phase in canonical order.
    pub fn from_fn(mut f: impl FnMut(Phase) -> T) -> Self {
        PhaseMap(Phase::ALL.map(&mut f))
    }

    pub fn get(&self, phase: Phase) -> &T {
        &self.0[phase.index()]
    }

    pub fn set(&mut self, phase: Phase, value: T) {
        self.0[phase.index()] = value;
    }

    /// Iterates `(phase, value)` pairs in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (Phase, &T)> {
        Phase::ALL.iter().copied().zip(self.0.iter())
    }

    pub fn as_array(&self) -> &[T; Phase::COUNT] {
        &self.0
    }
}

impl PhaseMap<f64> {
    /// A map holding `value` for every phase.
    pub fn splat(value: f64) -> Self {
        PhaseMap([value; Phase::COUNT])
    }

    pub fn zero() -> Self {
        Self::splat(0.0)
    }

    /// Sum over phases, in canonical order.
    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }
}

impl<T> Index<Phase> for PhaseMap<T> {
    type Output = T;

    fn index(&self, phase: Phase) -> &T {
        self.get(phase)
    }
}

impl<T> From<[T; Phase::COUNT]> for PhaseMap<T> {
    fn from(values: [T; Phase::COUNT]) -> Self {
        PhaseMap(values)
    }
}

impl<T: Serialize> Serialize for PhaseMap<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(Phase::COUNT))?;
        for (phase, value) in self.iter() {
            map.serialize_entry(phase.name(), value)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for PhaseMap<f64> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct MapVisitor;

        impl<'de> Visitor<'de> for MapVisitor {
            type Value = PhaseMap<f64>;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a map with one numeric entry per lifecycle phase")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
                let mut slots: [Option<f64>; Phase::COUNT] = [None; Phase::COUNT];
                while let Some((key, value)) = access.next_entry::<String, f64>()? {
                    let phase = Phase::from_name(&key).ok_or_else(|| {
                        serde::de::Error::custom(format!("unknown phase `{key}`"))
                    })?;
                    if slots[phase.index()].replace(value).is_some() {
                        return Err(serde::de::Error::custom(format!(
                            "duplicate phase `{key}`"
                        )));
                    }
                }
                let mut values = [0.0; Phase::COUNT];
                for phase in Phase::ALL {
                    values[phase.index()] = slots[phase.index()].ok_or_else(|| {
                        serde::de::Error::custom(format!("missing phase `{}`", phase.name()))
                    })?;
                }
                Ok(PhaseMap(values))
            }
        }

        deserializer.deserialize_map(MapVisitor)
    }
}
