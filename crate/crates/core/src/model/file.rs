//! Model file: a pretty-printed JSON document holding the config and, per
//! layer, the tap matrices (row-major, `out x in`) and the bias vector.
//!
//! Every weight is written in scientific notation with 17 significant
//! digits, so a save/load cycle reproduces each `f64` bit for bit.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{LayerWeights, Model, ModelConfig};
use crate::error::{Error, Result};

const FORMAT_TAG: &str = "dilated-stream-model/1";

#[derive(Debug, Clone, Copy)]
struct Exact(f64);

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let text = format!("{:.16e}", self.0);
        let number: serde_json::Number = text
            .parse()
            .map_err(|_| serde::ser::Error::custom(format!("cannot encode {} as a number", self.0)))?;
        number.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        // Parse the literal text with the std parser, which rounds correctly.
        let number = serde_json::Number::deserialize(deserializer)?;
        number
            .to_string()
            .parse::<f64>()
            .map(Exact)
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct LayerDoc {
    taps: Vec<Vec<Vec<Exact>>>,
    bias: Vec<Exact>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    format: String,
    config: ModelConfig,
    layers: Vec<LayerDoc>,
}

impl From<&LayerWeights> for LayerDoc {
    fn from(layer: &LayerWeights) -> Self {
        let taps = layer
            .taps
            .iter()
            .map(|tap| {
                tap.chunks(layer.in_channels)
                    .map(|row| row.iter().copied().map(Exact).collect())
                    .collect()
            })
            .collect();
        LayerDoc {
            taps,
            bias: layer.bias.iter().copied().map(Exact).collect(),
        }
    }
}

fn layer_from_doc(index: usize, doc: LayerDoc) -> Result<LayerWeights> {
    let out_channels = doc.bias.len();
    let in_channels = doc
        .taps
        .first()
        .and_then(|tap| tap.first())
        .map_or(0, Vec::len);
    let mut taps = Vec::with_capacity(doc.taps.len());
    for (k, tap) in doc.taps.into_iter().enumerate() {
        if tap.len() != out_channels || tap.iter().any(|row| row.len() != in_channels) {
            return Err(Error::DimensionMismatch(format!(
                "layer {index} tap {k} is not a {out_channels}x{in_channels} matrix"
            )));
        }
        taps.push(tap.into_iter().flatten().map(|v| v.0).collect());
    }
    Ok(LayerWeights {
        in_channels,
        out_channels,
        taps,
        bias: doc.bias.into_iter().map(|v| v.0).collect(),
    })
}

pub fn write_model<W: Write>(model: &Model, mut writer: W) -> Result<()> {
    let doc = ModelDoc {
        format: FORMAT_TAG.to_owned(),
        config: *model.config(),
        layers: model.layers().iter().map(LayerDoc::from).collect(),
    };
    serde_json::to_writer_pretty(&mut writer, &doc)?;
    writer.write_all(b"\n")?;
    Ok(())
}

pub fn read_model<R: Read>(reader: R) -> Result<Model> {
    let doc: ModelDoc = serde_json::from_reader(reader)?;
    if doc.format != FORMAT_TAG {
        return Err(Error::InvalidConfig(format!(
            "unsupported model format `{}` (expected `{FORMAT_TAG}`)",
            doc.format
        )));
    }
    let layers = doc
        .layers
        .into_iter()
        .enumerate()
        .map(|(i, layer)| layer_from_doc(i, layer))
        .collect::<Result<Vec<_>>>()?;
    Model::new(doc.config, layers)
}

pub fn save_model(model: &Model, path: impl AsRef<Path>) -> Result<()> {
    let mut buf = Vec::new();
    write_model(model, &mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<Model> {
    let file = fs::File::open(path)?;
    read_model(std::io::BufReader::new(file))
}
