//! Opaque string identifiers for the model's entities.
//!
//! Identifiers are compared and sorted as plain byte strings; every
//! deterministic tie-break in the library ("lexicographically smallest
//! event", sorted variable order in the LP export, …) refers to this order.

use std::borrow::Borrow;
use std::fmt;

macro_rules! id_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            pub fn new(s: impl Into<String>) -> Self {
                Self(s.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self(s.to_owned())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                Self(s)
            }
        }

        impl Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }
    };
}

id_type!(
    /// Identifies one arrival or departure event.
    EventId
);
id_type!(
    /// Identifies one activity (arc) of the network.
    ActivityId
);
id_type!(
    /// Identifies a train line.
    LineId
);
id_type!(
    /// Identifies a station.
    StationId
);
