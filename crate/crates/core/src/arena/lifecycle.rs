use rand::Rng;

use super::{Agent, Arena};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LifecycleReport {
    pub births: usize,
    pub deaths: usize,
    pub moves: usize,
}

const NEIGHBOURS: [(i64, i64); 8] = [
    (-1, -1),
    (0, -1),
    (1, -1),
    (-1, 0),
    (1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];

fn empty_neighbours(
    x: u32,
    y: u32,
    width: usize,
    height: usize,
    occupied: &[bool],
) -> Vec<(u32, u32)> {
    NEIGHBOURS
        .iter()
        .filter_map(|&(dx, dy)| {
            let nx = x as i64 + dx;
            let ny = y as i64 + dy;
            if nx < 1 || ny < 1 || nx > width as i64 || ny > height as i64 {
                return None;
            }
            let cell = (ny as usize - 1) * width + nx as usize - 1;
            (!occupied[cell]).then_some((nx as u32, ny as u32))
        })
        .collect()
}

/// Divide, die or move, visiting agents in row-major order.
///
/// An agent at or above its division threshold splits its biomass with a
/// daughter placed on a random empty 8-neighbour (no division when none is
/// free). Otherwise an agent below the death threshold, or starved for
/// `starvation_limit` steps, is removed. Remaining agents move to a random
/// empty neighbour with probability `p_move`. Daughters are not visited in
/// the pass that creates them.
pub fn apply_agent_lifecycle<R: Rng>(arena: &mut Arena, rng: &mut R) -> LifecycleReport {
    arena.sort_agents();
    let (width, height) = (arena.width, arena.height);
    let params = arena.lifecycle;
    let mut occupied = arena.occupancy();
    let mut alive = vec![true; arena.agents.len()];
    let mut newborn: Vec<Agent> = Vec::new();
    let mut report = LifecycleReport::default();

    for (idx, agent) in arena.agents.iter_mut().enumerate() {
        let species = &arena.species[agent.genotype as usize - 1];
        let division = params.division_factor * species.initial_biomass;
        let death = params.death_factor * species.initial_biomass;
        let cell = (agent.y as usize - 1) * width + agent.x as usize - 1;

        if agent.biomass >= division {
            let free = empty_neighbours(agent.x, agent.y, width, height, &occupied);
            if !free.is_empty() {
                let (nx, ny) = free[rng.gen_range(0..free.len())];
                let half = agent.biomass / 2.0;
                let mut daughter = agent.clone();
                agent.biomass = half;
                daughter.biomass -= half;
                daughter.x = nx;
                daughter.y = ny;
                occupied[(ny as usize - 1) * width + nx as usize - 1] = true;
                newborn.push(daughter);
                report.births += 1;
            }
            continue;
        }

        if agent.biomass < death || agent.starvation >= params.starvation_limit {
            alive[idx] = false;
            occupied[cell] = false;
            report.deaths += 1;
            continue;
        }

        if params.p_move > 0.0 && rng.gen_bool(params.p_move) {
            let free = empty_neighbours(agent.x, agent.y, width, height, &occupied);
            if !free.is_empty() {
                let (nx, ny) = free[rng.gen_range(0..free.len())];
                occupied[cell] = false;
                occupied[(ny as usize - 1) * width + nx as usize - 1] = true;
                agent.x = nx;
                agent.y = ny;
                report.moves += 1;
            }
        }
    }

    let mut keep = alive.into_iter();
    arena.agents.retain(|_| keep.next().unwrap_or(true));
    arena.agents.extend(newborn);
    arena.sort_agents();
    report
}
