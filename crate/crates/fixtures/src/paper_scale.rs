//! A catalog sized like a real single-category run: 42 classes, 20 datatype
//! and 49 object properties, 291 products of which 9 get broken responses.
//!
//! Successful products yield 26 or 27 triples each, and two datatype
//! properties are never used, so a complete run has known totals.

use std::collections::BTreeSet;

use kgforge_core::corpus::ProductRecord;
use kgforge_core::ontology::Ontology;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::agent::SyntheticAgent;
use crate::catalog::{Entity, ProductFacts, Value};
use crate::schema::SchemaBuilder;

pub const NAMESPACE: &str = "http://example.org/hvac#";
pub const CATEGORY: &str = "air conditioners";
pub const PRODUCTS: usize = 291;
pub const MALFORMED: usize = 9;
/// Successful products that carry one extra datatype value.
pub const RICH_PRODUCTS: usize = 127;

const PRODUCT_CLASSES: [(&str, &str); 10] = [
    ("Product", "Any item offered for sale."),
    ("AirConditioner", "Appliance that cools indoor air."),
    ("SplitAirConditioner", "Air conditioner with separate indoor and outdoor units."),
    ("MultiSplitAirConditioner", "Split system with several indoor units on one outdoor unit."),
    ("WindowAirConditioner", "Single unit mounted in a window opening."),
    ("PortableAirConditioner", "Movable single unit with an exhaust hose."),
    ("CassetteAirConditioner", "Ceiling-recessed indoor unit with four-way airflow."),
    ("DuctedAirConditioner", "Concealed unit distributing air through ducts."),
    ("FloorStandingAirConditioner", "Indoor unit standing on the floor."),
    ("WallMountedAirConditioner", "Split indoor unit mounted high on a wall."),
];

const COMPONENT_CLASSES: [(&str, &str); 32] = [
    ("Brand", "Brand under which the product is sold."),
    ("Manufacturer", "Company that builds the product."),
    ("Compressor", "Refrigerant compressor."),
    ("InverterCompressor", "Variable-speed compressor."),
    ("Refrigerant", "Refrigerant used in the cooling circuit."),
    ("IndoorUnit", "Indoor part of a split system."),
    ("OutdoorUnit", "Outdoor part of a split system."),
    ("RemoteControl", "Handheld remote control."),
    ("AirFilter", "Filter cleaning the recirculated air."),
    ("Fan", "Fan moving air across a heat exchanger."),
    ("HeatExchanger", "Coil exchanging heat with the refrigerant."),
    ("Thermostat", "Temperature controller."),
    ("Display", "Status display on the unit."),
    ("Timer", "On and off timer."),
    ("OperatingMode", "Selectable operating mode such as cooling or drying."),
    ("FanSpeedSetting", "Selectable fan speed."),
    ("EnergyLabel", "Regulatory energy label."),
    ("Certification", "Safety or efficiency certification."),
    ("Warranty", "Manufacturer warranty terms."),
    ("PowerSupply", "Electrical supply characteristics."),
    ("PowerCord", "Mains cable."),
    ("InstallationKit", "Parts shipped for installation."),
    ("DrainPump", "Pump removing condensate."),
    ("MountingBracket", "Bracket for wall or window mounting."),
    ("Sensor", "Sensor feeding the controller."),
    ("ConnectivityModule", "Network module for remote control."),
    ("MobileApp", "Smartphone application controlling the unit."),
    ("VoiceAssistant", "Voice assistant platform the unit works with."),
    ("NoiseProfile", "Published noise characteristics."),
    ("AirPurifier", "Built-in air purification stage."),
    ("Dehumidifier", "Built-in dehumidification function."),
    ("Color", "Housing colour."),
];

/// (local name, xsd datatype, comment). The last two are never populated.
const DATATYPE_PROPERTIES: [(&str, &str, &str); 20] = [
    ("modelNumber", "string", "Manufacturer model number, verbatim."),
    ("coolingCapacity", "integer", "Cooling capacity in BTU/h, integer."),
    ("seer", "decimal", "Seasonal energy efficiency ratio, decimal."),
    ("weight", "decimal", "Net weight in kilograms, decimal."),
    ("voltage", "integer", "Rated supply voltage in volts, integer."),
    ("heatingCapacity", "integer", "Heating capacity in BTU/h, integer."),
    ("eer", "decimal", "Energy efficiency ratio, decimal."),
    ("scop", "decimal", "Seasonal coefficient of performance, decimal."),
    ("noiseLevelIndoor", "decimal", "Indoor sound pressure in dB(A), decimal."),
    ("noiseLevelOutdoor", "decimal", "Outdoor sound pressure in dB(A), decimal."),
    ("width", "integer", "Width in millimetres, integer."),
    ("height", "integer", "Height in millimetres, integer."),
    ("depth", "integer", "Depth in millimetres, integer."),
    ("ratedPower", "integer", "Rated electrical input in watts, integer."),
    ("roomSizeMax", "decimal", "Largest recommended room in square metres, decimal."),
    ("airflowRate", "integer", "Maximum airflow in cubic metres per hour, integer."),
    ("wifiEnabled", "boolean", "Whether the unit can be controlled over Wi-Fi."),
    ("releaseYear", "integer", "Year of market introduction, integer."),
    ("discontinuationDate", "date", "Date the model left the catalog."),
    ("recallNotice", "string", "Text of any product recall notice."),
];

/// Always-present datatype values; the rest rotate.
const FIXED_DATATYPE: usize = 5;
const USED_DATATYPE: usize = 18;

/// (local name, range class). Every object property has domain Product.
const OBJECT_PROPERTIES: [(&str, &str); 49] = [
    ("hasBrand", "Brand"),
    ("hasManufacturer", "Manufacturer"),
    ("hasCompressor", "Compressor"),
    ("hasInverterCompressor", "InverterCompressor"),
    ("hasRefrigerant", "Refrigerant"),
    ("hasIndoorUnit", "IndoorUnit"),
    ("hasOutdoorUnit", "OutdoorUnit"),
    ("hasRemoteControl", "RemoteControl"),
    ("hasAirFilter", "AirFilter"),
    ("hasFan", "Fan"),
    ("hasHeatExchanger", "HeatExchanger"),
    ("hasThermostat", "Thermostat"),
    ("hasDisplay", "Display"),
    ("hasTimer", "Timer"),
    ("supportsOperatingMode", "OperatingMode"),
    ("hasFanSpeedSetting", "FanSpeedSetting"),
    ("hasEnergyLabel", "EnergyLabel"),
    ("hasCertification", "Certification"),
    ("hasWarranty", "Warranty"),
    ("hasPowerSupply", "PowerSupply"),
    ("hasPowerCord", "PowerCord"),
    ("includesInstallationKit", "InstallationKit"),
    ("hasDrainPump", "DrainPump"),
    ("includesMountingBracket", "MountingBracket"),
    ("hasSensor", "Sensor"),
    ("hasConnectivityModule", "ConnectivityModule"),
    ("controllableVia", "MobileApp"),
    ("worksWithVoiceAssistant", "VoiceAssistant"),
    ("hasNoiseProfile", "NoiseProfile"),
    ("hasAirPurifier", "AirPurifier"),
    ("hasDehumidifier", "Dehumidifier"),
    ("hasColor", "Color"),
    ("hasCoolingMode", "OperatingMode"),
    ("hasHeatingMode", "OperatingMode"),
    ("hasDryMode", "OperatingMode"),
    ("hasFanOnlyMode", "OperatingMode"),
    ("hasSleepMode", "OperatingMode"),
    ("hasAutoMode", "OperatingMode"),
    ("hasTemperatureSensor", "Sensor"),
    ("hasHumiditySensor", "Sensor"),
    ("hasOccupancySensor", "Sensor"),
    ("hasPrimaryFilter", "AirFilter"),
    ("hasSecondaryFilter", "AirFilter"),
    ("hasSafetyCertification", "Certification"),
    ("hasEfficiencyCertification", "Certification"),
    ("hasPartsWarranty", "Warranty"),
    ("hasCompressorWarranty", "Warranty"),
    ("hasIndoorFan", "Fan"),
    ("hasOutdoorFan", "Fan"),
];

const LINKS_PER_PRODUCT: usize = 8;

pub fn ontology() -> Ontology {
    let mut b = SchemaBuilder::new(NAMESPACE);
    for (i, (name, comment)) in PRODUCT_CLASSES.iter().enumerate() {
        let parents: &[&str] = match i {
            0 => &[],
            1 => &["Product"],
            _ => &["AirConditioner"],
        };
        b = b.class(name, parents, comment);
    }
    for (name, comment) in COMPONENT_CLASSES {
        let parents: &[&str] = if name == "InverterCompressor" { &["Compressor"] } else { &[] };
        b = b.class(name, parents, comment);
    }
    for (name, xsd, comment) in DATATYPE_PROPERTIES {
        b = b.datatype(name, "Product", xsd, comment);
    }
    for (name, range) in OBJECT_PROPERTIES {
        b = b.object(name, "Product", range, &format!("Links a product to its {}.", words(range)));
    }
    b.build()
}

fn words(camel: &str) -> String {
    let mut out = String::new();
    for (i, ch) in camel.chars().enumerate() {
        if ch.is_uppercase() && i > 0 {
            out.push(' ');
        }
        out.push(ch.to_ascii_lowercase());
    }
    out
}

/// Positions of the products whose responses are broken.
pub fn malformed_indices() -> Vec<usize> {
    (0..MALFORMED).map(|k| 17 + 32 * k).collect()
}

fn datatype_value(index: usize, product: usize) -> Value {
    let (name, xsd, _) = DATATYPE_PROPERTIES[index];
    let n = product as i64;
    match (name, xsd) {
        ("modelNumber", _) => Value::Str(format!("HV-{:04}", 100 + n)),
        ("coolingCapacity", _) => Value::Int([9000, 12000, 18000, 24000][product % 4]),
        ("heatingCapacity", _) => Value::Int([10000, 13000, 19000, 25000][product % 4]),
        ("voltage", _) => Value::Int(if product.is_multiple_of(5) { 115 } else { 230 }),
        ("wifiEnabled", _) => Value::Bool(product.is_multiple_of(2)),
        ("releaseYear", _) => Value::Int(2015 + n % 9),
        (_, "integer") => Value::Int(200 + (n * 37) % 700),
        (_, "decimal") => Value::Dec(format!("{}.{}", 10 + n % 30, n % 10)),
        _ => Value::Str(format!("value {n}")),
    }
}

/// The 291 products in corpus order.
pub fn products() -> Vec<ProductFacts> {
    let malformed: BTreeSet<usize> = malformed_indices().into_iter().collect();
    let mut successes: Vec<usize> = (0..PRODUCTS).filter(|i| !malformed.contains(i)).collect();
    successes.shuffle(&mut ChaCha8Rng::seed_from_u64(291));
    let rich: BTreeSet<usize> = successes[..RICH_PRODUCTS].iter().copied().collect();

    (0..PRODUCTS)
        .map(|i| {
            let class = PRODUCT_CLASSES[1 + i % (PRODUCT_CLASSES.len() - 1)].0;
            let rotating = USED_DATATYPE - FIXED_DATATYPE;
            let extra = if rich.contains(&i) { 5 } else { 4 };
            let mut indices: Vec<usize> = (0..FIXED_DATATYPE).collect();
            indices.extend((0..extra).map(|j| FIXED_DATATYPE + (i * 5 + j) % rotating));
            let values: Vec<(String, Value)> =
                indices.iter().map(|&k| (DATATYPE_PROPERTIES[k].0.to_string(), datatype_value(k, i))).collect();
            let links: Vec<(String, Entity)> = (0..LINKS_PER_PRODUCT)
                .map(|j| {
                    let (name, range) = OBJECT_PROPERTIES[(i * LINKS_PER_PRODUCT + j) % OBJECT_PROPERTIES.len()];
                    (
                        name.to_string(),
                        Entity { suffix: words(name).replace(' ', "-"), class: range.into(), values: vec![] },
                    )
                })
                .collect();
            let mut text = vec![format!("HV-{:04} {}.", 100 + i, words(class))];
            for (name, value) in &values {
                let shown = match value {
                    Value::Int(v) => v.to_string(),
                    Value::Dec(v) | Value::Str(v) => v.clone(),
                    Value::Bool(v) => if *v { "yes" } else { "no" }.to_string(),
                };
                text.push(format!("{}: {shown}.", words(name)));
            }
            for (_, entity) in &links {
                text.push(format!("Features a {}.", words(&entity.class)));
            }
            ProductFacts {
                record: ProductRecord {
                    id: format!("PS-{:04}", i + 1),
                    category: CATEGORY.into(),
                    description: text.join(" "),
                    source: None,
                },
                class: class.into(),
                values,
                links,
            }
        })
        .collect()
}

pub fn agent() -> SyntheticAgent {
    let products = products();
    let mut agent = SyntheticAgent::new(ontology(), products.clone());
    agent.malformed = malformed_indices().into_iter().map(|i| products[i].record.id.clone()).collect();
    agent
}

/// Expected totals for a complete single-attempt run.
pub fn expected_triples() -> usize {
    let succeeded = PRODUCTS - MALFORMED;
    let base = 1 + FIXED_DATATYPE + 4 + 2 * LINKS_PER_PRODUCT;
    succeeded * base + RICH_PRODUCTS
}
