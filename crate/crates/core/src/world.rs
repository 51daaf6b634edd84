//! City map: tile grid, spawn list, the `OUTBREAK-MAP v1` text format and
//! grid path finding shared by NPCs and bots.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digest::fnv1a64;

pub const MAP_MAGIC: &str = "OUTBREAK-MAP v1";

/// Entity identifier; equals the spawn's index in `WorldMap::spawns`.
pub type EntityId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TilePos {
    pub x: u32,
    pub y: u32,
}

impl TilePos {
    pub const fn new(x: u32, y: u32) -> Self {
        Self { x, y }
    }

    pub fn manhattan(self, other: TilePos) -> u32 {
        self.x.abs_diff(other.x) + self.y.abs_diff(other.y)
    }

    /// Moves one tile in `dir`; `None` when that would go below zero.
    pub fn offset(self, dir: Direction) -> Option<TilePos> {
        let (dx, dy) = dir.delta();
        let x = self.x.checked_add_signed(dx)?;
        let y = self.y.checked_add_signed(dy)?;
        Some(TilePos { x, y })
    }
}

impl fmt::Display for TilePos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.x, self.y)
    }
}

/// The four grid directions in the fixed exploration order used everywhere
/// a tie has to be broken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Up,
    Down,
    Left,
    Right,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::Up, Direction::Down, Direction::Left, Direction::Right];

    pub fn delta(self) -> (i32, i32) {
        match self {
            Direction::Up => (0, -1),
            Direction::Down => (0, 1),
            Direction::Left => (-1, 0),
            Direction::Right => (1, 0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TileKind {
    Floor,
    Wall,
    GroceryShop,
    Pharmacy,
    Clinic,
    /// Also the finish location.
    Home,
}

impl TileKind {
    pub fn glyph(self) -> char {
        match self {
            TileKind::Floor => '.',
            TileKind::Wall => '#',
            TileKind::GroceryShop => 'G',
            TileKind::Pharmacy => 'R',
            TileKind::Clinic => 'C',
            TileKind::Home => 'H',
        }
    }

    pub fn code(self) -> u8 {
        match self {
            TileKind::Floor => 0,
            TileKind::Wall => 1,
            TileKind::GroceryShop => 2,
            TileKind::Pharmacy => 3,
            TileKind::Clinic => 4,
            TileKind::Home => 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EntityKind {
    Player,
    Civilian,
    Monster,
    MaskPickup,
    SanitizerPickup,
    GroceryPickup,
    MedicinePickup,
}

impl EntityKind {
    /// Entities that carry a health state and take part in contact transmission.
    pub fn is_actor(self) -> bool {
        matches!(self, EntityKind::Player | EntityKind::Civilian | EntityKind::Monster)
    }

    pub fn is_npc(self) -> bool {
        matches!(self, EntityKind::Civilian | EntityKind::Monster)
    }

    pub fn is_pickup(self) -> bool {
        !self.is_actor()
    }

    pub fn code(self) -> u8 {
        match self {
            EntityKind::Player => 0,
            EntityKind::Civilian => 1,
            EntityKind::Monster => 2,
            EntityKind::MaskPickup => 3,
            EntityKind::SanitizerPickup => 4,
            EntityKind::GroceryPickup => 5,
            EntityKind::MedicinePickup => 6,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EntityKind::Player => "Player",
            EntityKind::Civilian => "Civilian",
            EntityKind::Monster => "Monster",
            EntityKind::MaskPickup => "MaskPickup",
            EntityKind::SanitizerPickup => "SanitizerPickup",
            EntityKind::GroceryPickup => "GroceryPickup",
            EntityKind::MedicinePickup => "MedicinePickup",
        }
    }
}

/// What a legend glyph stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlyphMeaning {
    Tile(TileKind),
    Entity { kind: EntityKind, infected: bool },
}

impl GlyphMeaning {
    fn parse(name: &str) -> Option<Self> {
        use EntityKind as E;
        use TileKind as T;
        let meaning = match name {
            "Wall" => Self::Tile(T::Wall),
            "Floor" => Self::Tile(T::Floor),
            "GroceryShop" => Self::Tile(T::GroceryShop),
            "Pharmacy" => Self::Tile(T::Pharmacy),
            "Clinic" => Self::Tile(T::Clinic),
            "Home" => Self::Tile(T::Home),
            "Player" => Self::Entity { kind: E::Player, infected: false },
            "Civilian" => Self::Entity { kind: E::Civilian, infected: false },
            "InfectedCivilian" => Self::Entity { kind: E::Civilian, infected: true },
            "Monster" => Self::Entity { kind: E::Monster, infected: true },
            "MaskPickup" => Self::Entity { kind: E::MaskPickup, infected: false },
            "SanitizerPickup" => Self::Entity { kind: E::SanitizerPickup, infected: false },
            "GroceryPickup" => Self::Entity { kind: E::GroceryPickup, infected: false },
            "MedicinePickup" => Self::Entity { kind: E::MedicinePickup, infected: false },
            _ => return None,
        };
        Some(meaning)
    }
}

/// The built-in glyph table. A map's `legend:` block is applied on top of it.
pub const DEFAULT_LEGEND: [(char, &str); 14] = [
    ('#', "Wall"),
    ('.', "Floor"),
    ('P', "Player"),
    ('c', "Civilian"),
    ('i', "InfectedCivilian"),
    ('m', "Monster"),
    ('M', "MaskPickup"),
    ('S', "SanitizerPickup"),
    ('g', "GroceryPickup"),
    ('d', "MedicinePickup"),
    ('C', "Clinic"),
    ('H', "Home"),
    ('G', "GroceryShop"),
    ('R', "Pharmacy"),
];

fn default_legend() -> BTreeMap<char, GlyphMeaning> {
    DEFAULT_LEGEND
        .iter()
        .map(|&(g, name)| (g, GlyphMeaning::parse(name).expect("default legend names are valid")))
        .collect()
}

fn entity_glyph(kind: EntityKind, infected: bool) -> char {
    match (kind, infected) {
        (EntityKind::Player, _) => 'P',
        (EntityKind::Civilian, false) => 'c',
        (EntityKind::Civilian, true) => 'i',
        (EntityKind::Monster, _) => 'm',
        (EntityKind::MaskPickup, _) => 'M',
        (EntityKind::SanitizerPickup, _) => 'S',
        (EntityKind::GroceryPickup, _) => 'g',
        (EntityKind::MedicinePickup, _) => 'd',
    }
}

/// Movement behaviour of an NPC, attached to its spawn in the map file.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NpcBehavior {
    Idle,
    /// Seeded random walk (crowds).
    Walk,
    /// Cycles through the waypoints in order (queues, monster patrols).
    Loop(Vec<TilePos>),
}

impl NpcBehavior {
    fn default_for(kind: EntityKind) -> Self {
        match kind {
            EntityKind::Civilian => NpcBehavior::Walk,
            _ => NpcBehavior::Idle,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spawn {
    pub kind: EntityKind,
    pub pos: TilePos,
    pub initially_infected: bool,
    pub behavior: NpcBehavior,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("line {line}: expected header `{MAP_MAGIC}`")]
    BadHeader { line: usize },
    #[error("line {line}, column {column}: unknown glyph {glyph:?}")]
    UnknownGlyph { line: usize, column: usize, glyph: char },
    #[error("map has no player spawn")]
    NoPlayerSpawn,
    #[error("map has {count} player spawns, expected exactly one")]
    MultiplePlayerSpawns { count: usize },
    #[error("line {line}: row has {found} cells, expected {expected}")]
    RaggedRows { line: usize, expected: usize, found: usize },
    #[error("map needs at least one Clinic and one Home tile")]
    MissingClinicOrHome,
    #[error("map grid is empty")]
    EmptyGrid,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("position {pos} is outside the {width}x{height} map")]
    OutOfBounds { pos: TilePos, width: u32, height: u32 },
    #[error("spawn at {pos} is on a wall")]
    SpawnOnWall { pos: TilePos },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorldMap {
    width: u32,
    height: u32,
    tiles: Vec<TileKind>,
    spawns: Vec<Spawn>,
}

impl WorldMap {
    /// Validates and builds a map from parts.
    pub fn new(width: u32, height: u32, tiles: Vec<TileKind>, spawns: Vec<Spawn>) -> Result<Self, MapError> {
        if width == 0 || height == 0 || tiles.len() != (width as usize) * (height as usize) {
            return Err(MapError::EmptyGrid);
        }
        let map = Self { width, height, tiles, spawns };
        let players = map.spawns.iter().filter(|s| s.kind == EntityKind::Player).count();
        match players {
            0 => return Err(MapError::NoPlayerSpawn),
            1 => {}
            count => return Err(MapError::MultiplePlayerSpawns { count }),
        }
        for s in &map.spawns {
            if !map.is_walkable(s.pos)? {
                return Err(MapError::SpawnOnWall { pos: s.pos });
            }
            if let NpcBehavior::Loop(points) = &s.behavior {
                for &p in points {
                    if !map.is_walkable(p)? {
                        return Err(MapError::SpawnOnWall { pos: p });
                    }
                }
            }
        }
        let has = |k: TileKind| map.tiles.iter().any(|&t| t == k);
        if !has(TileKind::Clinic) || !has(TileKind::Home) {
            return Err(MapError::MissingClinicOrHome);
        }
        Ok(map)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn spawns(&self) -> &[Spawn] {
        &self.spawns
    }

    pub fn in_bounds(&self, p: TilePos) -> bool {
        p.x < self.width && p.y < self.height
    }

    pub fn tile(&self, p: TilePos) -> Result<TileKind, MapError> {
        if !self.in_bounds(p) {
            return Err(MapError::OutOfBounds { pos: p, width: self.width, height: self.height });
        }
        Ok(self.tiles[(p.y * self.width + p.x) as usize])
    }

    pub fn is_walkable(&self, p: TilePos) -> Result<bool, MapError> {
        Ok(self.tile(p)? != TileKind::Wall)
    }

    /// In-bounds, non-wall check that treats out-of-bounds as blocked.
    pub fn passable(&self, p: TilePos) -> bool {
        self.in_bounds(p) && self.tiles[(p.y * self.width + p.x) as usize] != TileKind::Wall
    }

    pub fn tiles_of(&self, kind: TileKind) -> impl Iterator<Item = TilePos> + '_ {
        let w = self.width;
        self.tiles
            .iter()
            .enumerate()
            .filter(move |(_, &t)| t == kind)
            .map(move |(i, _)| TilePos::new(i as u32 % w, i as u32 / w))
    }

    pub fn player_spawn(&self) -> &Spawn {
        self.spawns
            .iter()
            .find(|s| s.kind == EntityKind::Player)
            .expect("validated map has a player")
    }

    pub fn count_spawns(&self, kind: EntityKind) -> usize {
        self.spawns.iter().filter(|s| s.kind == kind).count()
    }

    /// FNV-1a 64 of the canonical serialization.
    pub fn digest(&self) -> u64 {
        fnv1a64(serialize_map(self).as_bytes())
    }

    /// Walkable 4-neighbours of `p`, in `Direction::ALL` order.
    pub fn open_neighbors(&self, p: TilePos) -> impl Iterator<Item = (Direction, TilePos)> + '_ {
        Direction::ALL
            .into_iter()
            .filter_map(move |d| p.offset(d).filter(|&q| self.passable(q)).map(|q| (d, q)))
    }

    /// First step of a shortest path from `from` to any tile accepted by
    /// `is_goal`, avoiding tiles rejected by `allowed` (the start is always
    /// allowed). Returns `Some(None)` when `from` already is a goal and `None`
    /// when no goal is reachable. Ties resolve in `Direction::ALL` order.
    pub fn first_step_towards(
        &self,
        from: TilePos,
        is_goal: impl Fn(TilePos) -> bool,
        allowed: impl Fn(TilePos) -> bool,
    ) -> Option<Option<Direction>> {
        if is_goal(from) {
            return Some(None);
        }
        let idx = |p: TilePos| (p.y * self.width + p.x) as usize;
        let mut first: Vec<Option<Direction>> = vec![None; self.tiles.len()];
        let mut seen = vec![false; self.tiles.len()];
        seen[idx(from)] = true;
        let mut queue = VecDeque::new();
        queue.push_back(from);
        while let Some(p) = queue.pop_front() {
            for (d, q) in self.open_neighbors(p) {
                if seen[idx(q)] || !allowed(q) {
                    continue;
                }
                seen[idx(q)] = true;
                let dir = if p == from { d } else { first[idx(p)].expect("interior node has a first step") };
                first[idx(q)] = Some(dir);
                if is_goal(q) {
                    return Some(Some(dir));
                }
                queue.push_back(q);
            }
        }
        None
    }
}

/// Ids of all entities located at `p`, ascending.
pub fn entities_at<'a, I>(entities: I, p: TilePos) -> Vec<EntityId>
where
    I: IntoIterator<Item = (EntityId, TilePos)> + 'a,
{
    let mut ids: Vec<EntityId> = entities.into_iter().filter(|&(_, q)| q == p).map(|(id, _)| id).collect();
    ids.sort_unstable();
    ids
}

fn parse_pos(s: &str, line: usize) -> Result<TilePos, MapError> {
    let err = || MapError::Syntax { line, message: format!("bad position {s:?}, expected x,y") };
    let (x, y) = s.split_once(',').ok_or_else(err)?;
    Ok(TilePos::new(x.trim().parse().map_err(|_| err())?, y.trim().parse().map_err(|_| err())?))
}

#[derive(PartialEq)]
enum Section {
    Preamble,
    Legend,
    Behaviors,
    Grid,
}

/// Parses an `OUTBREAK-MAP v1` document.
///
/// ```text
/// OUTBREAK-MAP v1
/// legend:
/// x=Wall              (optional overrides/additions to the default legend)
/// behaviors:
/// 3,4 loop 3,4 8,4    (NPC at spawn 3,4 cycles through the waypoints)
/// 5,6 walk            (random walk; `idle` stands still)
/// grid:
/// #####
/// #P.C#
/// ...
/// ```
pub fn parse_map(text: &str) -> Result<WorldMap, MapError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)));
    match lines.next() {
        Some((_, l)) if l.trim_end() == MAP_MAGIC => {}
        _ => return Err(MapError::BadHeader { line: 1 }),
    }

    let mut legend = default_legend();
    let mut behaviors: BTreeMap<TilePos, (usize, NpcBehavior)> = BTreeMap::new();
    let mut rows: Vec<(usize, &str)> = Vec::new();
    let mut section = Section::Preamble;

    for (n, line) in lines {
        if section == Section::Grid {
            if line.is_empty() {
                continue;
            }
            rows.push((n, line));
            continue;
        }
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with(';') {
            continue;
        }
        match trimmed {
            "legend:" | "legend: default" => {
                section = Section::Legend;
                continue;
            }
            "behaviors:" => {
                section = Section::Behaviors;
                continue;
            }
            "grid:" => {
                section = Section::Grid;
                continue;
            }
            _ => {}
        }
        match section {
            Section::Legend => {
                let (g, name) = trimmed.split_once('=').ok_or_else(|| MapError::Syntax {
                    line: n,
                    message: format!("legend entry {trimmed:?} is not glyph=Kind"),
                })?;
                let mut chars = g.trim().chars();
                let glyph = match (chars.next(), chars.next()) {
                    (Some(c), None) => c,
                    _ => {
                        return Err(MapError::Syntax { line: n, message: format!("legend glyph {g:?} is not a single character") })
                    }
                };
                let meaning = GlyphMeaning::parse(name.trim())
                    .ok_or_else(|| MapError::Syntax { line: n, message: format!("unknown kind {:?}", name.trim()) })?;
                legend.insert(glyph, meaning);
            }
            Section::Behaviors => {
                let mut parts = trimmed.split_whitespace();
                let at = parse_pos(parts.next().unwrap_or_default(), n)?;
                let behavior = match parts.next() {
                    Some("walk") => NpcBehavior::Walk,
                    Some("idle") => NpcBehavior::Idle,
                    Some("loop") => {
                        let points = parts.by_ref().map(|p| parse_pos(p, n)).collect::<Result<Vec<_>, _>>()?;
                        if points.is_empty() {
                            return Err(MapError::Syntax { line: n, message: "loop needs at least one waypoint".into() });
                        }
                        NpcBehavior::Loop(points)
                    }
                    other => {
                        return Err(MapError::Syntax { line: n, message: format!("unknown behavior {other:?}") });
                    }
                };
                if parts.next().is_some() {
                    return Err(MapError::Syntax { line: n, message: "trailing tokens after behavior".into() });
                }
                if behaviors.insert(at, (n, behavior)).is_some() {
                    return Err(MapError::Syntax { line: n, message: format!("duplicate behavior for {at}") });
                }
            }
            Section::Preamble => {
                return Err(MapError::Syntax { line: n, message: format!("unexpected line {trimmed:?} before a section") })
            }
            Section::Grid => unreachable!(),
        }
    }

    let Some(&(_, first_row)) = rows.first() else {
        return Err(MapError::EmptyGrid);
    };
    let width = first_row.chars().count();
    let height = rows.len();
    let mut tiles = Vec::with_capacity(width * height);
    let mut spawns = Vec::new();
    for (y, &(n, row)) in rows.iter().enumerate() {
        let found = row.chars().count();
        if found != width {
            return Err(MapError::RaggedRows { line: n, expected: width, found });
        }
        for (x, glyph) in row.chars().enumerate() {
            let meaning = legend.get(&glyph).ok_or(MapError::UnknownGlyph { line: n, column: x + 1, glyph })?;
            match *meaning {
                GlyphMeaning::Tile(t) => tiles.push(t),
                GlyphMeaning::Entity { kind, infected } => {
                    tiles.push(TileKind::Floor);
                    let pos = TilePos::new(x as u32, y as u32);
                    let behavior = match behaviors.remove(&pos) {
                        Some((n, _)) if !kind.is_npc() => {
                            return Err(MapError::Syntax { line: n, message: format!("behavior at {pos} targets a non-NPC") });
                        }
                        Some((_, b)) => b,
                        None => NpcBehavior::default_for(kind),
                    };
                    spawns.push(Spawn { kind, pos, initially_infected: infected, behavior });
                }
            }
        }
    }
    if let Some((pos, (n, _))) = behaviors.into_iter().next() {
        return Err(MapError::Syntax { line: n, message: format!("behavior at {pos} has no NPC spawn") });
    }

    WorldMap::new(width as u32, height as u32, tiles, spawns)
}

/// Canonical text form: default legend, explicit behaviors for every NPC,
/// then the grid. `parse_map(&serialize_map(m)) == m`.
pub fn serialize_map(map: &WorldMap) -> String {
    let mut out = String::new();
    out.push_str(MAP_MAGIC);
    out.push('\n');
    out.push_str("legend:\n");
    for (g, name) in DEFAULT_LEGEND {
        let _ = writeln!(out, "{g}={name}");
    }
    out.push_str("behaviors:\n");
    for s in map.spawns.iter().filter(|s| s.kind.is_npc()) {
        match &s.behavior {
            NpcBehavior::Idle => {
                let _ = writeln!(out, "{} idle", s.pos);
            }
            NpcBehavior::Walk => {
                let _ = writeln!(out, "{} walk", s.pos);
            }
            NpcBehavior::Loop(points) => {
                let _ = write!(out, "{} loop", s.pos);
                for p in points {
                    let _ = write!(out, " {p}");
                }
                out.push('\n');
            }
        }
    }
    out.push_str("grid:\n");
    let mut glyphs: Vec<char> = map.tiles.iter().map(|t| t.glyph()).collect();
    for s in &map.spawns {
        glyphs[(s.pos.y * map.width + s.pos.x) as usize] = entity_glyph(s.kind, s.initially_infected);
    }
    for row in glyphs.chunks(map.width as usize) {
        out.extend(row.iter());
        out.push('\n');
    }
    out
}

/// Text of the map shipped with the crate.
pub const BUNDLED_MAP: &str = include_str!("../data/default.map");

pub fn bundled_map() -> WorldMap {
    parse_map(BUNDLED_MAP).expect("bundled map is valid")
}
