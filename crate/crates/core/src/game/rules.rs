use serde::{Deserialize, Serialize};

use super::route::{EffectTag, Position, RouteSpec, ENTRY_ROLL, GOOSE_RESTART};
use super::state::GameState;
use super::GameKind;

/// One legal way to spend a roll: which marker moves and the cells it steps
/// through, ending at its destination.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveCandidate {
    pub marker_id: usize,
    pub path: Vec<Position>,
}

impl MoveCandidate {
    pub fn destination(&self) -> Position {
        *self.path.last().expect("candidate path is never empty")
    }
}

/// Closed-form landing square when a linear route bounces off its end.
pub fn bounce_target(last: u32, from: u32, value: u32) -> u32 {
    let reach = from + value;
    if reach > last {
        last - (reach - last)
    } else {
        reach
    }
}

/// Steps `value` cells from `from`, recording each cell. With `exact`, excess
/// steps are walked backwards from `last`; otherwise the walk stops at `last`.
pub(crate) fn walk_linear(last: u32, exact: bool, from: u32, value: u32, path: &mut Vec<Position>) -> u32 {
    let mut pos = from;
    let mut forward = true;
    for _ in 0..value {
        if pos == last {
            if !exact {
                break;
            }
            forward = false;
        }
        pos = if forward { pos + 1 } else { pos - 1 };
        path.push(Position::Track(pos));
    }
    pos
}

/// Outcome of applying a candidate, before it is written back to the state.
#[derive(Debug, Default)]
pub(crate) struct Resolution {
    pub path: Vec<Position>,
    pub effects: Vec<EffectTag>,
    pub hold: u32,
    pub captured: Vec<(usize, usize)>,
    pub released: Vec<(usize, usize)>,
}

pub(crate) fn legal_moves(state: &GameState, team: usize, value: u32) -> Vec<MoveCandidate> {
    if !state.mode.dice().contains(value) {
        return Vec::new();
    }
    match state.kind {
        GameKind::Motorsport | GameKind::Goose => {
            let marker = &state.teams[team].markers[0];
            let Position::Track(from) = marker.position else {
                return Vec::new();
            };
            let mut path = Vec::with_capacity(value as usize);
            walk_linear(state.route.track_length, exact_linear(state), from, value, &mut path);
            if path.is_empty() {
                return Vec::new();
            }
            vec![MoveCandidate { marker_id: marker.marker_id, path }]
        }
        GameKind::Parcheesi => parcheesi_moves(state, team, value),
    }
}

fn exact_linear(state: &GameState) -> bool {
    state.kind == GameKind::Goose && state.mode.exact_finish()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cell {
    Ring(u32),
    Column(usize, u32),
}

fn cell_of(route: &RouteSpec, seat: usize, pos: Position) -> Option<Cell> {
    match pos {
        Position::Track(step) => Some(Cell::Ring(route.ring_cell(seat, step))),
        Position::HomeColumn(j) => Some(Cell::Column(seat, j)),
        Position::Nest | Position::Home => None,
    }
}

/// Markers standing on board cells, as (cell, team, marker_id).
fn board_occupancy(state: &GameState) -> Vec<(Cell, usize, usize)> {
    state
        .teams
        .iter()
        .flat_map(|t| t.markers.iter())
        .filter_map(|m| cell_of(&state.route, m.owner, m.position).map(|c| (c, m.owner, m.marker_id)))
        .collect()
}

fn occupants(board: &[(Cell, usize, usize)], cell: Cell) -> impl Iterator<Item = (usize, usize)> + '_ {
    board.iter().filter(move |(c, _, _)| *c == cell).map(|&(_, t, m)| (t, m))
}

fn is_blockade(board: &[(Cell, usize, usize)], cell: Cell) -> bool {
    let mut occ = occupants(board, cell);
    match (occ.next(), occ.next()) {
        (Some((a, _)), Some((b, _))) => a == b,
        _ => false,
    }
}

fn parcheesi_moves(state: &GameState, team: usize, value: u32) -> Vec<MoveCandidate> {
    let route = &state.route;
    let board = board_occupancy(state);
    let goal = route.parcheesi_goal();
    let mut seen: Vec<Position> = Vec::new();
    let mut out = Vec::new();

    for marker in &state.teams[team].markers {
        // markers sharing a square are interchangeable
        if seen.contains(&marker.position) {
            continue;
        }
        seen.push(marker.position);

        let path = match marker.position {
            Position::Home => continue,
            Position::Nest => {
                if value != ENTRY_ROLL {
                    continue;
                }
                let entry = Cell::Ring(route.ring_cell(team, 0));
                if occupants(&board, entry).count() >= 2 {
                    continue;
                }
                vec![Position::Track(0)]
            }
            pos => {
                let from = route.progress(pos).expect("on-board marker has progress");
                let mut target = from + value;
                if target > goal {
                    if state.mode.exact_finish() {
                        continue;
                    }
                    target = goal;
                }
                let mut path = Vec::with_capacity((target - from) as usize);
                let mut blocked = false;
                for q in from + 1..=target {
                    let step = route.position_at_progress(q);
                    if let Some(cell) = cell_of(route, team, step) {
                        let stop = if q < target {
                            is_blockade(&board, cell)
                        } else {
                            occupants(&board, cell).count() >= 2
                        };
                        if stop {
                            blocked = true;
                            break;
                        }
                    }
                    path.push(step);
                }
                if blocked {
                    continue;
                }
                path
            }
        };
        out.push(MoveCandidate { marker_id: marker.marker_id, path });
    }
    out
}

pub(crate) fn resolve(state: &GameState, team: usize, value: u32, chosen: &MoveCandidate) -> Resolution {
    match state.kind {
        GameKind::Parcheesi => resolve_parcheesi(state, team, chosen),
        GameKind::Motorsport | GameKind::Goose => resolve_linear(state, team, value, chosen),
    }
}

fn resolve_parcheesi(state: &GameState, team: usize, chosen: &MoveCandidate) -> Resolution {
    let route = &state.route;
    let mut res = Resolution { path: chosen.path.clone(), ..Default::default() };
    if let Some(Cell::Ring(cell)) = cell_of(route, team, chosen.destination()) {
        if !route.is_safe(cell) {
            let board = board_occupancy(state);
            let here: Vec<_> = occupants(&board, Cell::Ring(cell)).collect();
            if let [(victim, marker)] = here[..] {
                if victim != team {
                    res.captured.push((victim, marker));
                }
            }
        }
    }
    res
}

fn resolve_linear(state: &GameState, team: usize, value: u32, chosen: &MoveCandidate) -> Resolution {
    let route = &state.route;
    let last = route.track_length;
    let exact = exact_linear(state);
    let mut res = Resolution { path: chosen.path.clone(), ..Default::default() };
    let Position::Track(mut pos) = chosen.destination() else {
        unreachable!("linear routes only use track positions");
    };

    while pos != last {
        let Some(effect) = route.effect_at(pos) else { break };
        res.effects.push(effect);
        match effect {
            EffectTag::GooseAdvance => {
                pos = walk_linear(last, exact, pos, value, &mut res.path);
                continue;
            }
            EffectTag::BridgeTo(target) | EffectTag::MazeTo(target) => pos = target,
            EffectTag::DeathToStart => pos = GOOSE_RESTART,
            hold => {
                res.hold = hold.hold_turns().unwrap_or(0);
                if hold.released_by_arrival() {
                    for other in state.teams.iter().filter(|t| t.team_index != team) {
                        for m in &other.markers {
                            if m.position == Position::Track(pos) && m.hold_turns_remaining > 0 {
                                res.released.push((m.owner, m.marker_id));
                            }
                        }
                    }
                }
                break;
            }
        }
        res.path.push(Position::Track(pos));
    }
    res
}
