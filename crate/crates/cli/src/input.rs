//! Map-file loading: Kraus channel, Choi matrix, or superoperator files,
//! recognized by their schema, with diagnostics naming the failed field
//! or invariant.

use anyhow::{anyhow, bail, Context};
use std::path::Path;

use extremap_core::channels::{
    choi_of, kraus_from_choi, superop_of_choi, ChannelJson, ChoiJson, ChoiMatrix, KrausChannel,
    SuperOpJson, SuperOpMatrix,
};
use extremap_core::CoreError;

/// A parsed map file in whichever representation it used.
pub enum MapInput {
    Kraus(KrausChannel),
    Choi(ChoiMatrix),
    Superop(SuperOpMatrix),
}

impl MapInput {
    pub fn describe(&self) -> &'static str {
        match self {
            Self::Kraus(_) => "kraus",
            Self::Choi(_) => "choi",
            Self::Superop(_) => "superop",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Kraus(ch) => ch.dim(),
            Self::Choi(c) => c.dim(),
            Self::Superop(s) => s.dim(),
        }
    }

    /// The Choi matrix of the map, whatever the input representation.
    pub fn to_choi(&self) -> ChoiMatrix {
        match self {
            Self::Kraus(ch) => choi_of(ch),
            Self::Choi(c) => c.clone(),
            Self::Superop(s) => s.choi(),
        }
    }

    /// The superoperator of the map; exact for every representation.
    pub fn to_superop(&self) -> SuperOpMatrix {
        match self {
            Self::Kraus(ch) => SuperOpMatrix::from_channel(ch),
            Self::Choi(c) => superop_of_choi(c),
            Self::Superop(s) => s.clone(),
        }
    }

    /// A Kraus channel; fails with `NotCompletelyPositive` when the map
    /// is not CP.
    pub fn to_channel(&self, tol: f64) -> Result<KrausChannel, CoreError> {
        match self {
            Self::Kraus(ch) => Ok(ch.clone()),
            Self::Choi(c) => kraus_from_choi(c, tol),
            Self::Superop(s) => kraus_from_choi(&s.choi(), tol),
        }
    }
}

/// Parse a channel / Choi / superoperator file.
pub fn load_map_file(path: &Path) -> anyhow::Result<MapInput> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read '{}'", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .with_context(|| format!("'{}' is not valid JSON", path.display()))?;

    let kind = value
        .get("type")
        .and_then(|v| v.as_str())
        .map(str::to_owned);
    let result = if value.get("kraus").is_some() {
        serde_json::from_value::<ChannelJson>(value)
            .map_err(|e| anyhow!("channel file field error: {e}"))?
            .to_channel()
            .map(MapInput::Kraus)
            .map_err(|e| anyhow!("{e}"))
    } else {
        match kind.as_deref() {
            Some("choi") => serde_json::from_value::<ChoiJson>(value)
                .map_err(|e| anyhow!("choi file field error: {e}"))?
                .to_choi()
                .map(MapInput::Choi)
                .map_err(|e| anyhow!("{e}")),
            Some("superop") => serde_json::from_value::<SuperOpJson>(value)
                .map_err(|e| anyhow!("superop file field error: {e}"))?
                .to_superop()
                .map(MapInput::Superop)
                .map_err(|e| anyhow!("{e}")),
            Some(other) => bail!(
                "unsupported map type '{other}' in '{}'; expected a file with a \
                 'kraus' array, or type 'choi' or 'superop'",
                path.display()
            ),
            None => bail!(
                "'{}' has neither a 'kraus' array nor a 'type' tag",
                path.display()
            ),
        }
    };
    result.with_context(|| format!("invalid map file '{}'", path.display()))
}
