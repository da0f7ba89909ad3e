//! Built-in vocabulary: room categories per context, asset templates and the
//! human model roster. Graph synthesis draws from these tables and the default
//! model database is authored from the same entries, so every synthesized
//! asset has candidate models.

use crate::graph::WorldContext;

pub struct AssetTemplate {
    pub name: &'static str,
    /// Width, depth, height in meters.
    pub size: [f64; 3],
    /// (color, material) variants.
    pub variants: &'static [(&'static str, &'static str)],
    /// Room categories where the asset appears, with affinity weight.
    pub rooms: &'static [(&'static str, f64)],
}

pub struct HumanTemplate {
    pub description: &'static str,
    pub role: &'static str,
    pub height: f64,
    pub color: &'static str,
    pub material: &'static str,
    pub rooms: &'static [(&'static str, f64)],
}

/// Room categories and their draw weights for a context.
pub fn room_categories(ctx: WorldContext) -> &'static [(&'static str, f64)] {
    match ctx {
        WorldContext::Hospital => &[
            ("ward", 0.35),
            ("examination", 0.15),
            ("waiting", 0.12),
            ("reception", 0.08),
            ("office", 0.1),
            ("storage", 0.08),
            ("restroom", 0.07),
            ("corridor", 0.05),
        ],
        WorldContext::Residential => &[
            ("living", 0.2),
            ("bedroom", 0.25),
            ("kitchen", 0.15),
            ("bathroom", 0.12),
            ("dining", 0.1),
            ("study", 0.08),
            ("hallway", 0.05),
            ("storage", 0.05),
        ],
        WorldContext::Office => &[
            ("open-office", 0.3),
            ("office", 0.2),
            ("meeting", 0.15),
            ("pantry", 0.1),
            ("reception", 0.07),
            ("restroom", 0.08),
            ("storage", 0.05),
            ("hallway", 0.05),
        ],
        WorldContext::Generic => &[
            ("hall", 0.2),
            ("office", 0.2),
            ("storage", 0.15),
            ("lobby", 0.1),
            ("kitchen", 0.1),
            ("restroom", 0.1),
            ("meeting", 0.1),
            ("corridor", 0.05),
        ],
    }
}

/// Templates usable in `category`, with affinity weights.
pub fn templates_for_room(category: &str) -> Vec<(&'static AssetTemplate, f64)> {
    ASSET_TEMPLATES.iter().filter_map(|t| t.rooms.iter().find(|(c, _)| *c == category).map(|(_, w)| (t, *w))).collect()
}

const WOOD: &[(&str, &str)] = &[("oak-brown", "wood"), ("walnut-brown", "wood"), ("white", "wood"), ("black", "metal")];
const SOFT: &[(&str, &str)] = &[("red", "fabric"), ("blue", "fabric"), ("grey", "fabric"), ("black", "leather")];
const METAL: &[(&str, &str)] = &[("grey", "metal"), ("silver", "steel"), ("white", "metal")];
const PLASTIC: &[(&str, &str)] =
    &[("red", "plastic"), ("blue", "plastic"), ("green", "plastic"), ("yellow", "plastic")];
const CERAMIC: &[(&str, &str)] = &[("white", "ceramic"), ("beige", "ceramic"), ("grey", "stone")];
const MEDICAL: &[(&str, &str)] = &[("white", "metal"), ("teal", "plastic"), ("silver", "steel")];

pub const ASSET_TEMPLATES: &[AssetTemplate] = &[
    AssetTemplate {
        name: "chair",
        size: [0.5, 0.5, 0.9],
        variants: PLASTIC,
        rooms: &[
            ("waiting", 0.9),
            ("dining", 0.9),
            ("meeting", 0.8),
            ("kitchen", 0.5),
            ("pantry", 0.6),
            ("hall", 0.6),
            ("lobby", 0.5),
            ("examination", 0.4),
        ],
    },
    AssetTemplate {
        name: "office chair",
        size: [0.6, 0.6, 1.0],
        variants: SOFT,
        rooms: &[("office", 0.9), ("open-office", 0.9), ("study", 0.7), ("reception", 0.5), ("meeting", 0.4)],
    },
    AssetTemplate {
        name: "desk",
        size: [1.4, 0.7, 0.75],
        variants: WOOD,
        rooms: &[("office", 0.9), ("open-office", 0.9), ("study", 0.8), ("reception", 0.3)],
    },
    AssetTemplate {
        name: "table",
        size: [1.2, 0.8, 0.75],
        variants: WOOD,
        rooms: &[("kitchen", 0.6), ("hall", 0.6), ("lobby", 0.3), ("pantry", 0.6), ("living", 0.3)],
    },
    AssetTemplate {
        name: "dining table",
        size: [1.4, 0.9, 0.75],
        variants: WOOD,
        rooms: &[("dining", 0.9), ("kitchen", 0.4)],
    },
    AssetTemplate { name: "meeting table", size: [1.8, 1.0, 0.75], variants: WOOD, rooms: &[("meeting", 0.9)] },
    AssetTemplate {
        name: "coffee table",
        size: [1.0, 0.5, 0.45],
        variants: WOOD,
        rooms: &[("living", 0.8), ("waiting", 0.4), ("lobby", 0.4)],
    },
    AssetTemplate {
        name: "sofa",
        size: [1.8, 0.8, 0.85],
        variants: SOFT,
        rooms: &[("living", 0.9), ("lobby", 0.4), ("waiting", 0.3)],
    },
    AssetTemplate {
        name: "armchair",
        size: [0.8, 0.8, 0.9],
        variants: SOFT,
        rooms: &[("living", 0.7), ("study", 0.4), ("waiting", 0.4), ("lobby", 0.5), ("ward", 0.2)],
    },
    AssetTemplate {
        name: "bench",
        size: [1.4, 0.45, 0.45],
        variants: METAL,
        rooms: &[("waiting", 0.7), ("corridor", 0.6), ("hallway", 0.4), ("lobby", 0.6), ("hall", 0.5)],
    },
    AssetTemplate { name: "bed", size: [1.9, 0.9, 0.55], variants: WOOD, rooms: &[("bedroom", 0.95)] },
    AssetTemplate { name: "hospital bed", size: [1.9, 0.9, 0.7], variants: MEDICAL, rooms: &[("ward", 0.95)] },
    AssetTemplate {
        name: "examination table",
        size: [1.8, 0.7, 0.8],
        variants: MEDICAL,
        rooms: &[("examination", 0.9)],
    },
    AssetTemplate {
        name: "medical cart",
        size: [0.6, 0.45, 1.0],
        variants: MEDICAL,
        rooms: &[("ward", 0.6), ("examination", 0.7), ("corridor", 0.3), ("storage", 0.2)],
    },
    AssetTemplate {
        name: "iv stand",
        size: [0.5, 0.5, 1.8],
        variants: MEDICAL,
        rooms: &[("ward", 0.7), ("examination", 0.4)],
    },
    AssetTemplate {
        name: "wheelchair",
        size: [0.65, 1.0, 0.9],
        variants: MEDICAL,
        rooms: &[("ward", 0.3), ("waiting", 0.3), ("corridor", 0.4), ("storage", 0.3)],
    },
    AssetTemplate {
        name: "wardrobe",
        size: [1.0, 0.55, 2.0],
        variants: WOOD,
        rooms: &[("bedroom", 0.8), ("ward", 0.3), ("storage", 0.3)],
    },
    AssetTemplate {
        name: "bookshelf",
        size: [0.9, 0.35, 1.8],
        variants: WOOD,
        rooms: &[("study", 0.9), ("living", 0.5), ("office", 0.5)],
    },
    AssetTemplate {
        name: "cabinet",
        size: [0.8, 0.45, 1.0],
        variants: WOOD,
        rooms: &[
            ("kitchen", 0.5),
            ("bathroom", 0.4),
            ("office", 0.4),
            ("examination", 0.5),
            ("storage", 0.6),
            ("reception", 0.3),
        ],
    },
    AssetTemplate {
        name: "filing cabinet",
        size: [0.5, 0.6, 1.3],
        variants: METAL,
        rooms: &[("office", 0.7), ("open-office", 0.6), ("reception", 0.4), ("storage", 0.4)],
    },
    AssetTemplate {
        name: "storage shelf",
        size: [1.0, 0.4, 1.8],
        variants: METAL,
        rooms: &[("storage", 0.9), ("pantry", 0.3), ("hall", 0.2)],
    },
    AssetTemplate {
        name: "crate",
        size: [0.6, 0.6, 0.6],
        variants: PLASTIC,
        rooms: &[("storage", 0.8), ("hall", 0.3), ("corridor", 0.1)],
    },
    AssetTemplate {
        name: "locker",
        size: [0.5, 0.5, 1.8],
        variants: METAL,
        rooms: &[("storage", 0.5), ("hallway", 0.2), ("corridor", 0.2)],
    },
    AssetTemplate {
        name: "reception counter",
        size: [1.6, 0.6, 1.1],
        variants: WOOD,
        rooms: &[("reception", 0.95), ("lobby", 0.6)],
    },
    AssetTemplate {
        name: "kitchen counter",
        size: [1.2, 0.6, 0.9],
        variants: CERAMIC,
        rooms: &[("kitchen", 0.9), ("pantry", 0.8)],
    },
    AssetTemplate {
        name: "fridge",
        size: [0.7, 0.7, 1.8],
        variants: METAL,
        rooms: &[("kitchen", 0.9), ("pantry", 0.7)],
    },
    AssetTemplate { name: "stove", size: [0.6, 0.6, 0.9], variants: METAL, rooms: &[("kitchen", 0.8)] },
    AssetTemplate {
        name: "sink",
        size: [0.6, 0.45, 0.9],
        variants: CERAMIC,
        rooms: &[("bathroom", 0.9), ("restroom", 0.9), ("kitchen", 0.5), ("examination", 0.4)],
    },
    AssetTemplate {
        name: "toilet",
        size: [0.4, 0.7, 0.8],
        variants: CERAMIC,
        rooms: &[("bathroom", 0.9), ("restroom", 0.9)],
    },
    AssetTemplate { name: "bathtub", size: [1.6, 0.75, 0.6], variants: CERAMIC, rooms: &[("bathroom", 0.6)] },
    AssetTemplate {
        name: "tv stand",
        size: [1.2, 0.4, 0.5],
        variants: WOOD,
        rooms: &[("living", 0.7), ("waiting", 0.3), ("bedroom", 0.2)],
    },
    AssetTemplate {
        name: "potted plant",
        size: [0.4, 0.4, 1.0],
        variants: CERAMIC,
        rooms: &[
            ("lobby", 0.7),
            ("living", 0.5),
            ("reception", 0.5),
            ("waiting", 0.5),
            ("open-office", 0.4),
            ("hallway", 0.3),
            ("hall", 0.4),
            ("corridor", 0.2),
            ("meeting", 0.3),
        ],
    },
    AssetTemplate {
        name: "trash bin",
        size: [0.35, 0.35, 0.6],
        variants: PLASTIC,
        rooms: &[
            ("kitchen", 0.5),
            ("pantry", 0.6),
            ("office", 0.4),
            ("open-office", 0.5),
            ("restroom", 0.5),
            ("corridor", 0.3),
            ("hallway", 0.3),
            ("hall", 0.3),
            ("ward", 0.3),
        ],
    },
    AssetTemplate {
        name: "printer",
        size: [0.6, 0.5, 1.0],
        variants: METAL,
        rooms: &[("open-office", 0.5), ("office", 0.3)],
    },
    AssetTemplate {
        name: "water cooler",
        size: [0.35, 0.35, 1.3],
        variants: PLASTIC,
        rooms: &[("open-office", 0.4), ("pantry", 0.5), ("waiting", 0.4), ("lobby", 0.3), ("hallway", 0.2)],
    },
    AssetTemplate {
        name: "vending machine",
        size: [0.9, 0.8, 1.8],
        variants: METAL,
        rooms: &[("waiting", 0.3), ("lobby", 0.4), ("pantry", 0.4), ("hall", 0.3)],
    },
    AssetTemplate {
        name: "whiteboard stand",
        size: [1.2, 0.5, 1.8],
        variants: METAL,
        rooms: &[("meeting", 0.8), ("open-office", 0.3)],
    },
];

pub const HUMAN_TEMPLATES: &[HumanTemplate] = &[
    HumanTemplate {
        description: "nurse in blue scrubs",
        role: "nurse",
        height: 1.68,
        color: "blue",
        material: "cotton",
        rooms: &[("ward", 0.9), ("examination", 0.7), ("corridor", 0.6)],
    },
    HumanTemplate {
        description: "nurse in teal scrubs with mask",
        role: "nurse",
        height: 1.74,
        color: "teal",
        material: "cotton",
        rooms: &[("ward", 0.9), ("examination", 0.7)],
    },
    HumanTemplate {
        description: "doctor in white coat",
        role: "nurse",
        height: 1.80,
        color: "white",
        material: "cotton",
        rooms: &[("examination", 0.9), ("ward", 0.6), ("office", 0.3)],
    },
    HumanTemplate {
        description: "patient in hospital gown",
        role: "patient",
        height: 1.70,
        color: "green",
        material: "cotton",
        rooms: &[("ward", 0.9), ("waiting", 0.6)],
    },
    HumanTemplate {
        description: "elderly patient with walking cane",
        role: "patient",
        height: 1.62,
        color: "beige",
        material: "wool",
        rooms: &[("ward", 0.8), ("waiting", 0.8), ("corridor", 0.4)],
    },
    HumanTemplate {
        description: "child visitor in red jacket",
        role: "visitor",
        height: 1.20,
        color: "red",
        material: "denim",
        rooms: &[("waiting", 0.7), ("living", 0.6), ("lobby", 0.4)],
    },
    HumanTemplate {
        description: "visitor carrying flowers",
        role: "visitor",
        height: 1.72,
        color: "yellow",
        material: "cotton",
        rooms: &[("waiting", 0.8), ("ward", 0.5), ("reception", 0.6)],
    },
    HumanTemplate {
        description: "delivery courier with parcel",
        role: "visitor",
        height: 1.78,
        color: "orange",
        material: "polyester",
        rooms: &[("reception", 0.8), ("lobby", 0.7), ("hallway", 0.4)],
    },
    HumanTemplate {
        description: "office worker in grey suit",
        role: "worker",
        height: 1.82,
        color: "grey",
        material: "wool",
        rooms: &[("office", 0.9), ("open-office", 0.9), ("meeting", 0.8)],
    },
    HumanTemplate {
        description: "office worker in navy blazer",
        role: "worker",
        height: 1.66,
        color: "navy",
        material: "wool",
        rooms: &[("open-office", 0.9), ("meeting", 0.7), ("pantry", 0.5)],
    },
    HumanTemplate {
        description: "technician in orange overalls",
        role: "worker",
        height: 1.76,
        color: "orange",
        material: "canvas",
        rooms: &[("storage", 0.7), ("hallway", 0.4), ("hall", 0.5)],
    },
    HumanTemplate {
        description: "resident in casual hoodie",
        role: "resident",
        height: 1.75,
        color: "black",
        material: "cotton",
        rooms: &[("living", 0.9), ("kitchen", 0.7), ("bedroom", 0.6)],
    },
    HumanTemplate {
        description: "resident in pajamas",
        role: "resident",
        height: 1.64,
        color: "pink",
        material: "silk",
        rooms: &[("bedroom", 0.9), ("bathroom", 0.4), ("living", 0.4)],
    },
    HumanTemplate {
        description: "teenager with backpack",
        role: "resident",
        height: 1.70,
        color: "green",
        material: "nylon",
        rooms: &[("study", 0.7), ("living", 0.6), ("hallway", 0.4)],
    },
    HumanTemplate {
        description: "pedestrian in rain coat",
        role: "pedestrian",
        height: 1.77,
        color: "yellow",
        material: "rubber",
        rooms: &[("hall", 0.8), ("lobby", 0.8), ("corridor", 0.6)],
    },
    HumanTemplate {
        description: "pedestrian with rolling suitcase",
        role: "pedestrian",
        height: 1.73,
        color: "silver",
        material: "polyester",
        rooms: &[("hall", 0.7), ("lobby", 0.9), ("corridor", 0.5)],
    },
    HumanTemplate {
        description: "jogger in running gear",
        role: "pedestrian",
        height: 1.79,
        color: "red",
        material: "spandex",
        rooms: &[("hall", 0.6), ("corridor", 0.5), ("hallway", 0.4)],
    },
    HumanTemplate {
        description: "security guard in black uniform",
        role: "worker",
        height: 1.85,
        color: "black",
        material: "polyester",
        rooms: &[("lobby", 0.9), ("reception", 0.7), ("corridor", 0.5)],
    },
];
