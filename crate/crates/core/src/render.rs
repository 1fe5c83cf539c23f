//! ASCII and SVG drawings of levels.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use crate::kinematics::Geometry;
use crate::level::{Element, HepTrigger, Level, RoomId};

fn ids<'a>(set: impl IntoIterator<Item = &'a crate::level::ElementId>) -> String {
    let v: Vec<String> = set.into_iter().map(|e| e.to_string()).collect();
    format!("{{{}}}", v.join(","))
}

/// One line per element, placed in a room when it has one.
fn describe(e: &Element) -> (Option<RoomId>, String) {
    match e {
        Element::Door { id, initially_open } => {
            (None, format!("{id} door, initially {}", if *initially_open { "open" } else { "closed" }))
        }
        Element::TimedButton { id, room, duration_ticks, opens } => {
            (Some(*room), format!("{id} timed button, opens {} for {duration_ticks} ticks", ids(opens)))
        }
        Element::WeightedButton { id, room, while_pressed_opens, while_pressed_closes } => (
            Some(*room),
            format!(
                "{id} weighted button, opens {} closes {} while pressed",
                ids(while_pressed_opens),
                ids(while_pressed_closes)
            ),
        ),
        Element::Cube { id, initial_room } => (Some(*initial_room), format!("{id} cube")),
        Element::Turret { id, blocks, disable_room } => {
            let p: Vec<String> = blocks.iter().map(|p| format!("p{p}")).collect();
            (Some(*disable_room), format!("{id} turret, disabled here, covers {}", p.join(",")))
        }
        Element::PortalSurface { id, room, visible_from } => {
            let r: Vec<String> = visible_from.iter().map(|r| r.to_string()).collect();
            let seen = if r.is_empty() { String::new() } else { format!(", seen from {}", r.join(",")) };
            (Some(*room), format!("{id} portal surface{seen}"))
        }
        Element::HepPair { id, trigger, on_fire_opens, on_fire_closes } => {
            let how = match trigger {
                HepTrigger::Scheduled { catcher_fire_tick } => format!("fires at tick {catcher_fire_tick}"),
                HepTrigger::PortalRedirect { surfaces: (a, b) } => format!("fires when {a} and {b} are linked"),
            };
            (None, format!("{id} pellet, {how}, opens {} closes {}", ids(on_fire_opens), ids(on_fire_closes)))
        }
        Element::Switch { id, room, initial_state, open_in_state } => (
            Some(*room),
            format!(
                "{id} switch in state {initial_state}, state 0 opens {} state 1 opens {}",
                ids(&open_in_state[0]),
                ids(&open_in_state[1])
            ),
        ),
    }
}

pub fn ascii(level: &Level, geometry: Option<&Geometry>) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} rooms, {} passages, {} elements",
        level.rooms.len(),
        level.passages.len(),
        level.elements.len()
    );
    let mut by_room: BTreeMap<RoomId, Vec<String>> = BTreeMap::new();
    let mut global = Vec::new();
    for e in &level.elements {
        match describe(e) {
            (Some(r), d) => by_room.entry(r).or_default().push(d),
            (None, d) => global.push(d),
        }
    }
    s.push_str("\nrooms\n");
    for room in &level.rooms {
        let tag = match (room.id == level.start, room.id == level.goal) {
            (true, true) => " [start, goal]",
            (true, false) => " [start]",
            (false, true) => " [goal]",
            _ => "",
        };
        let _ = writeln!(s, "  {} {}{tag}", room.id, room.label);
        for d in by_room.get(&room.id).into_iter().flatten() {
            let _ = writeln!(s, "      {d}");
        }
    }
    s.push_str("\npassages\n");
    for (i, p) in level.passages.iter().enumerate() {
        let arrow = if p.one_way { "-->" } else { "<->" };
        let mut extra = String::new();
        if let Some(d) = p.guarded_by {
            let _ = write!(extra, " door {d}");
        }
        if p.grill {
            extra.push_str(" grill");
        }
        let _ = writeln!(s, "  p{i} {} {arrow} {} ({} ticks){extra}", p.from, p.to, p.traverse_ticks);
    }
    if !global.is_empty() {
        s.push_str("\ndoors and pellets\n");
        for d in global {
            let _ = writeln!(s, "  {d}");
        }
    }
    if let Some(g) = geometry {
        s.push('\n');
        s.push_str(&ascii_side_view(g));
    }
    s
}

fn ascii_side_view(g: &Geometry) -> String {
    let mut s = String::from("side view (depth to scale, 12 rows)\n");
    let deepest = g.wells.iter().map(|w| w.depth.approx()).fold(0.0, f64::max).max(1.0);
    let rows = 12;
    for row in 0..rows {
        let level = (row as f64 + 0.5) / rows as f64 * deepest;
        let line: String = g.wells.iter().map(|w| if w.depth.approx() > level { " | | " } else { " |_| " }).collect();
        let line = if row == 0 { line.replace(" | | ", " |v| ") } else { line };
        let _ = writeln!(s, "  {line}");
    }
    for w in &g.wells {
        let _ = writeln!(s, "  well {} value {} depth {} floor at x = {}", w.index, w.value, w.depth, w.floor_x);
    }
    for c in &g.ceilings {
        let _ = writeln!(s, "  ceiling {} at x = {} height {}", c.index, c.x, c.y);
    }
    let _ = writeln!(
        s,
        "  launch at x = {} height {}, platform at squared distance {} with half width {}",
        g.launch_x, g.launch_height, g.target_distance_sq, g.half_width
    );
    s
}

fn xml(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Rooms by breadth-first layer from the start, unreachable ones last.
fn layers(level: &Level) -> BTreeMap<RoomId, (usize, usize)> {
    let mut depth: BTreeMap<RoomId, usize> = BTreeMap::from([(level.start, 0)]);
    let mut queue = VecDeque::from([level.start]);
    while let Some(r) = queue.pop_front() {
        for p in &level.passages {
            let next = if p.from == r {
                Some(p.to)
            } else if p.to == r && !p.one_way {
                Some(p.from)
            } else {
                None
            };
            if let Some(n) = next {
                if !depth.contains_key(&n) {
                    depth.insert(n, depth[&r] + 1);
                    queue.push_back(n);
                }
            }
        }
    }
    let last = depth.values().max().copied().unwrap_or(0) + 1;
    let mut count: BTreeMap<usize, usize> = BTreeMap::new();
    level
        .rooms
        .iter()
        .map(|room| {
            let col = depth.get(&room.id).copied().unwrap_or(last);
            let row = count.entry(col).or_default();
            *row += 1;
            (room.id, (col, *row - 1))
        })
        .collect()
}

const COL: f64 = 220.0;
const ROW: f64 = 90.0;

pub fn svg(level: &Level, geometry: Option<&Geometry>) -> String {
    let pos = layers(level);
    let cols = pos.values().map(|p| p.0).max().unwrap_or(0) + 1;
    let rows = pos.values().map(|p| p.1).max().unwrap_or(0) + 1;
    let width = cols as f64 * COL + 40.0;
    let graph_height = rows as f64 * ROW + 40.0;
    let side_height = if geometry.is_some() { 320.0 } else { 0.0 };
    let height = graph_height + side_height;
    let centre = |r: RoomId| {
        let (c, row) = pos[&r];
        (20.0 + c as f64 * COL + 80.0, 20.0 + row as f64 * ROW + 25.0)
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r##"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="monospace" font-size="10">
<defs><marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="6" markerHeight="6" orient="auto"><path d="M0,0 L10,5 L0,10 z"/></marker></defs>"##
    );
    for (i, p) in level.passages.iter().enumerate() {
        let (x1, y1) = centre(p.from);
        let (x2, y2) = centre(p.to);
        let colour = if p.grill { "#0077cc" } else { "#444" };
        let dash = if p.guarded_by.is_some() { r##" stroke-dasharray="5,3""## } else { "" };
        let marker = if p.one_way { r##" marker-end="url(#arrow)""## } else { "" };
        let _ = writeln!(
            s,
            r##"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{colour}"{dash}{marker}><title>p{i} ({} ticks)</title></line>"##,
            p.traverse_ticks
        );
    }
    let mut notes: BTreeMap<RoomId, Vec<String>> = BTreeMap::new();
    for e in &level.elements {
        if let (Some(r), _) = describe(e) {
            notes.entry(r).or_default().push(format!("{} {}", e.id(), e.kind_name()));
        }
    }
    for room in &level.rooms {
        let (x, y) = centre(room.id);
        let fill = if room.id == level.goal {
            "#d8f5d0"
        } else if room.id == level.start {
            "#fdf2c4"
        } else {
            "#f4f4f4"
        };
        let _ = writeln!(
            s,
            r##"<rect x="{}" y="{}" width="160" height="50" rx="6" fill="{fill}" stroke="#222"/>"##,
            x - 80.0,
            y - 25.0
        );
        let _ = writeln!(s, r##"<text x="{}" y="{}">{} {}</text>"##, x - 75.0, y - 12.0, room.id, xml(&room.label));
        for (k, note) in notes.get(&room.id).into_iter().flatten().take(3).enumerate() {
            let _ = writeln!(s, r##"<text x="{}" y="{}" fill="#555">{}</text>"##, x - 75.0, y + k as f64 * 11.0, xml(note));
        }
    }
    if let Some(g) = geometry {
        svg_side_view(&mut s, g, graph_height, width, side_height);
    }
    s.push_str("</svg>\n");
    s
}

fn svg_side_view(s: &mut String, g: &Geometry, top: f64, width: f64, height: f64) {
    let reach = g.target_distance_sq.approx().sqrt();
    let right = g.launch_x.approx() + reach + g.half_width.approx();
    let left = g.wells.first().map(|w| w.floor_x.approx()).unwrap_or(0.0).min(0.0);
    let deepest = g.wells.iter().map(|w| w.depth.approx()).fold(g.launch_height.approx(), f64::max);
    let span = (right - left).max(1.0);
    let scale = ((width - 40.0) / span).min((height - 60.0) / (deepest + g.launch_height.approx()).max(1.0));
    let rim = top + 30.0 + g.launch_height.approx() * scale;
    let x = |v: f64| 20.0 + (v - left) * scale;
    let _ = writeln!(s, r##"<text x="20" y="{}">side view, 1 unit = {scale:.4} px</text>"##, top + 15.0);
    let _ = writeln!(s, r##"<line x1="20" y1="{rim}" x2="{}" y2="{rim}" stroke="#222"/>"##, width - 20.0);
    for w in &g.wells {
        let wx = x(w.floor_x.approx());
        let d = w.depth.approx() * scale;
        let _ = writeln!(
            s,
            r##"<rect x="{}" y="{rim}" width="{}" height="{d}" fill="none" stroke="#222"><title>well {} value {} depth {}</title></rect>"##,
            wx - 3.0,
            6.0,
            w.index,
            w.value,
            w.depth
        );
    }
    for c in &g.ceilings {
        let cy = rim - c.y.approx() * scale;
        let _ = writeln!(
            s,
            r##"<line x1="{}" y1="{cy}" x2="{}" y2="{cy}" stroke="#aa5500" stroke-width="2"/>"##,
            x(c.x.approx()) - 4.0,
            x(c.x.approx()) + 4.0
        );
    }
    let lx = x(g.launch_x.approx());
    let ly = rim - g.launch_height.approx() * scale;
    let _ = writeln!(s, r##"<circle cx="{lx}" cy="{ly}" r="3" fill="#0077cc"><title>launch</title></circle>"##);
    let px = x(g.launch_x.approx() + reach);
    let hw = g.half_width.approx() * scale;
    let _ = writeln!(
        s,
        r##"<rect x="{}" y="{rim}" width="{}" height="4" fill="#2a8a2a"><title>platform</title></rect>"##,
        px - hw,
        (2.0 * hw).max(1.0)
    );
}
