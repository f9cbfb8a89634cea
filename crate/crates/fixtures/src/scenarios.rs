//! The small air-conditioner scenario behind the end-to-end fixtures, plus
//! targeted refinement and conformance cases.

use kgforge_core::corpus::ProductRecord;
use kgforge_core::ontology::Ontology;
use kgforge_core::rdf::{parse_turtle, Triple};
use kgforge_core::stages::ConformanceCode;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::agent::{RefinePlan, SyntheticAgent};
use crate::catalog::{Entity, ProductFacts, Value};
use crate::schema::SchemaBuilder;

pub const AC_NAMESPACE: &str = "http://example.org/ac#";
pub const AC_CATEGORY: &str = "air conditioners";

/// Everything the air-conditioner agent can describe.
pub fn ac_schema() -> Ontology {
    SchemaBuilder::new(AC_NAMESPACE)
        .class("Product", &[], "Any item offered for sale.")
        .class("AirConditioner", &["Product"], "Appliance that cools indoor air.")
        .class("SplitAirConditioner", &["AirConditioner"], "Air conditioner with separate indoor and outdoor units.")
        .class("WindowAirConditioner", &["AirConditioner"], "Single-unit air conditioner mounted in a window opening.")
        .class(
            "PortableAirConditioner",
            &["AirConditioner"],
            "Movable single-unit air conditioner with an exhaust hose.",
        )
        .class("Brand", &[], "Brand under which a product is sold.")
        .class("Refrigerant", &[], "Refrigerant used in the cooling circuit.")
        .class("RemoteControl", &[], "Handheld remote control shipped with the product.")
        .object("hasBrand", "Product", "Brand", "Brand of the product.")
        .datatype("brandName", "Brand", "string", "Brand name as printed on the product.")
        .datatype("modelNumber", "Product", "string", "Manufacturer model number, verbatim.")
        .datatype("coolingCapacity", "AirConditioner", "integer", "Cooling capacity in BTU/h, integer.")
        .datatype("heatingCapacity", "AirConditioner", "integer", "Heating capacity in BTU/h, integer.")
        .datatype("seer", "AirConditioner", "decimal", "Seasonal energy efficiency ratio, decimal.")
        .datatype("noiseLevel", "AirConditioner", "decimal", "Indoor sound pressure level in dB(A), decimal.")
        .datatype("weight", "Product", "decimal", "Net weight in kilograms, decimal.")
        .datatype("dimensions", "Product", "string", "Width x height x depth in millimetres, as text.")
        .datatype("width", "Product", "integer", "Width in millimetres, integer.")
        .datatype("height", "Product", "integer", "Height in millimetres, integer.")
        .datatype("depth", "Product", "integer", "Depth in millimetres, integer.")
        .datatype("voltage", "Product", "integer", "Rated supply voltage in volts, integer.")
        .datatype("wifiEnabled", "AirConditioner", "boolean", "Whether the unit can be controlled over Wi-Fi.")
        .datatype("energyClass", "Product", "string", "Energy efficiency class label such as A++.")
        .datatype("warrantyYears", "Product", "integer", "Manufacturer warranty in years, integer.")
        .datatype("color", "Product", "string", "Housing colour in English, lower case.")
        .object("hasRefrigerant", "AirConditioner", "Refrigerant", "Refrigerant charged in the unit.")
        .datatype("refrigerantCode", "Refrigerant", "string", "ASHRAE refrigerant designation such as R32.")
        .object("hasRemoteControl", "AirConditioner", "RemoteControl", "Remote control included in the box.")
        .build()
}

const BRANDS: [&str; 5] = ["Acme", "Polar", "Frostline", "Nordwind", "Kaltwerk"];
const COLORS: [(&str, &str); 4] =
    [("white", "Farbe: weiß"), ("silver", "Farbe: silber"), ("black", "colour black"), ("grey", "colour grey")];

/// `n` air-conditioner products generated from a fixed seed.
pub fn ac_products(n: usize) -> Vec<ProductFacts> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    (0..n).map(|i| ac_product(i, &mut rng)).collect()
}

fn ac_product(i: usize, rng: &mut ChaCha8Rng) -> ProductFacts {
    let id = format!("AC-{}", 1001 + i);
    let brand = *BRANDS.choose(rng).expect("brands");
    let (class, kind) = match rng.random_range(0..10) {
        0..=5 => ("SplitAirConditioner", "split air conditioner"),
        6..=7 => ("WindowAirConditioner", "window air conditioner"),
        _ => ("PortableAirConditioner", "portable air conditioner"),
    };
    let model = format!("{}-{}{}", brand[..2].to_uppercase(), rng.random_range(10..99), ["S", "W", "P"][i % 3]);
    let btu = *[7000i64, 9000, 12000, 18000, 24000].choose(rng).expect("capacities");
    let seer = format!("{}.{}", rng.random_range(14..24), rng.random_range(0..10));
    let weight = format!("{}.{}", rng.random_range(18..60), rng.random_range(0..10));
    let (w, h, d) = (rng.random_range(600..1000), rng.random_range(250..700), rng.random_range(180..450));
    let voltage = if rng.random_bool(0.8) { 230 } else { 115 };

    let mut text =
        vec![format!("The {brand} {model} is a {kind} rated at {btu} BTU/h of cooling with a SEER of {seer}.")];
    let mut values = vec![
        ("modelNumber".to_string(), Value::Str(model.clone())),
        ("coolingCapacity".to_string(), Value::Int(btu)),
        ("seer".to_string(), Value::Dec(seer)),
    ];
    let mut links = vec![(
        "hasBrand".to_string(),
        Entity {
            suffix: "brand".into(),
            class: "Brand".into(),
            values: vec![("brandName".into(), Value::Str(brand.into()))],
        },
    )];
    if class == "SplitAirConditioner" && rng.random_bool(0.5) {
        let heat = btu + 1000;
        text.push(format!("In heat pump mode it delivers {heat} BTU/h."));
        values.push(("heatingCapacity".into(), Value::Int(heat)));
    }
    if rng.random_bool(0.6) {
        let noise = format!("{}.{}", rng.random_range(19..45), rng.random_range(0..10));
        text.push(format!("Indoor noise is as low as {noise} dB(A)."));
        values.push(("noiseLevel".into(), Value::Dec(noise)));
    }
    text.push(format!("It weighs {weight} kg and measures {w} x {h} x {d} mm (W x H x D)."));
    values.push(("weight".into(), Value::Dec(weight)));
    values.push(("dimensions".into(), Value::Str(format!("{w} x {h} x {d} mm"))));
    values.push(("width".into(), Value::Int(w)));
    values.push(("height".into(), Value::Int(h)));
    values.push(("depth".into(), Value::Int(d)));
    text.push(format!("Power supply: {voltage} V."));
    values.push(("voltage".into(), Value::Int(voltage)));
    if rng.random_bool(0.5) {
        text.push("Wi-Fi control through the companion app is built in.".into());
        values.push(("wifiEnabled".into(), Value::Bool(true)));
    }
    if rng.random_bool(0.2) {
        let class = *["A+", "A++", "A+++"].choose(rng).expect("classes");
        text.push(format!("Energy class {class}."));
        values.push(("energyClass".into(), Value::Str(class.into())));
    }
    if rng.random_bool(0.2) {
        let years = rng.random_range(2..8);
        text.push(format!("Backed by a {years}-year warranty."));
        values.push(("warrantyYears".into(), Value::Int(years)));
    }
    if rng.random_bool(0.3) {
        let (english, phrase) = *COLORS.choose(rng).expect("colours");
        text.push(format!("{phrase}."));
        values.push(("color".into(), Value::Str(english.into())));
    }
    if rng.random_bool(0.7) {
        let code = *["R32", "R410A", "R290"].choose(rng).expect("refrigerants");
        text.push(format!("Charged with {code} refrigerant."));
        links.push((
            "hasRefrigerant".into(),
            Entity {
                suffix: "refrigerant".into(),
                class: "Refrigerant".into(),
                values: vec![("refrigerantCode".into(), Value::Str(code.into()))],
            },
        ));
    }
    if rng.random_bool(0.15) {
        text.push("A remote control is included.".into());
        links.push((
            "hasRemoteControl".into(),
            Entity { suffix: "remote".into(), class: "RemoteControl".into(), values: vec![] },
        ));
    }
    ProductFacts {
        record: ProductRecord { id, category: AC_CATEGORY.into(), description: text.join(" "), source: None },
        class: class.into(),
        values,
        links,
    }
}

fn dimension_split() -> RefinePlan {
    RefinePlan {
        remove: vec!["dimensions".into()],
        add: vec!["width".into(), "height".into(), "depth".into()],
        mapping: vec![("dimensions".into(), vec!["width".into(), "height".into(), "depth".into()])],
    }
}

/// The agent for the bundled end-to-end run: it builds the ontology from the
/// catalog and splits the compound dimensions attribute when refining.
pub fn ac_agent(n: usize) -> SyntheticAgent {
    let mut agent = SyntheticAgent::new(ac_schema(), ac_products(n));
    agent.refine_only = ["width", "height", "depth"].into_iter().map(String::from).collect();
    agent.refine = dimension_split();
    agent
}

/// The ontology an agent for [`ac_schema`] would converge to before
/// refinement: every element except the split dimension properties.
pub fn ac_base_ontology() -> Ontology {
    let mut o = ac_schema();
    for local in ["width", "height", "depth"] {
        o.properties.remove(&crate::schema::term(&o, local));
    }
    o
}

/// Refinement that replaces `dimensions` by three properties with a mapping.
pub fn refine_split_agent() -> SyntheticAgent {
    let mut agent = SyntheticAgent::new(ac_schema(), Vec::new());
    agent.refine = dimension_split();
    agent
}

/// Refinement that silently drops two properties.
pub fn refine_drop_agent() -> SyntheticAgent {
    let mut agent = SyntheticAgent::new(ac_schema(), Vec::new());
    agent.refine =
        RefinePlan { remove: vec!["energyClass".into(), "warrantyYears".into()], add: vec![], mapping: vec![] };
    agent
}

/// Instance data with exactly one violation of each conformance code. Each
/// entry pairs a triple with the code it must raise.
pub const ADVERSARIAL_TTL: &str = "@prefix ex: <http://example.org/ac#> .
@prefix p: <http://example.org/product/> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .

p:ok a ex:SplitAirConditioner ;
    ex:coolingCapacity 12000 ;
    ex:seer 21 ;
    ex:hasBrand p:ok-brand .
p:ok-brand a ex:Brand ;
    ex:brandName \"Acme\" .

p:unknown a ex:AirConditioner ;
    ex:fanSpeeds 4 .
p:domain a ex:Brand ;
    ex:coolingCapacity 9000 .
p:range a ex:AirConditioner ;
    ex:hasBrand p:range-brand .
p:range-brand a ex:Refrigerant .
p:mismatch a ex:AirConditioner ;
    ex:seer \"high\" .
p:untyped ex:modelNumber \"X-1\" .
";

pub fn adversarial_triples() -> Vec<Triple> {
    parse_turtle(ADVERSARIAL_TTL).expect("fixture parses").iter().cloned().collect()
}

/// The violations [`ADVERSARIAL_TTL`] contains, as (subject local name, code).
pub fn adversarial_expected() -> Vec<(&'static str, ConformanceCode)> {
    vec![
        ("unknown", ConformanceCode::UnknownPredicate),
        ("domain", ConformanceCode::DomainViolation),
        ("range", ConformanceCode::RangeViolation),
        ("mismatch", ConformanceCode::DatatypeMismatch),
        ("untyped", ConformanceCode::UntypedSubject),
    ]
}
