//! Line-oriented play against the solver. Each turn prints the ordering so
//! far with back-scores; the human enters one vertex per line.

use std::io::{BufRead, Write};

use anyhow::Result;

use gcol_core::engine::{GameSpec, Player};
use gcol_core::ordering::{back_scores, col_of_ordering};
use gcol_core::strategy::{optimal_strategy, Strategy};
use gcol_core::{Graph, Ordering};

pub fn run(g: Graph, preorder: Ordering, human: Player, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<u8> {
    let spec = GameSpec::new(g, preorder)?;
    let g = spec.graph();
    let n = g.vertex_count();
    let computer = optimal_strategy(&spec, human.other())?;
    let mut history = spec.preorder().clone();
    writeln!(out, "you play {human}; the program plays {} optimally", human.other())?;
    while history.len() < n {
        show(g, &history, out)?;
        let mover = spec.mover_after(history.len());
        let v = if mover == human {
            match prompt(g, &history, human, input, out)? {
                Some(v) => v,
                None => {
                    writeln!(out)?;
                    writeln!(out, "input closed; game abandoned")?;
                    return Ok(0);
                }
            }
        } else {
            let v = computer.choose(&history)?;
            writeln!(out, "{mover} plays {v}")?;
            v
        };
        history.push(v)?;
    }
    show(g, &history, out)?;
    writeln!(out, "score = {}", col_of_ordering(g, &history)?)?;
    Ok(0)
}

fn show(g: &Graph, history: &Ordering, out: &mut dyn Write) -> Result<()> {
    let scores: Vec<String> =
        history.iter().zip(back_scores(g, history)).map(|(v, s)| format!("{v}:{s}")).collect();
    writeln!(out, "ordering: {}", history)?;
    writeln!(out, "scores: {}", if scores.is_empty() { "-".to_string() } else { scores.join(" ") })?;
    Ok(())
}

/// Reads until a legal vertex arrives; `None` on end of input.
fn prompt(
    g: &Graph,
    history: &Ordering,
    human: Player,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
) -> Result<Option<usize>> {
    loop {
        write!(out, "{human} to move> ")?;
        out.flush()?;
        let mut line = String::new();
        if input.read_line(&mut line)? == 0 {
            return Ok(None);
        }
        let text = line.trim();
        match text.parse::<usize>() {
            Ok(v) if v < g.vertex_count() && !history.contains(v) => {
                writeln!(out)?;
                return Ok(Some(v));
            }
            Ok(v) if v < g.vertex_count() => writeln!(out, "\nvertex {v} is already ordered")?,
            Ok(v) => writeln!(out, "\nno vertex {v}; vertices are 0..{}", g.vertex_count() - 1)?,
            Err(_) => writeln!(out, "\nexpected a vertex number, got {text:?}")?,
        }
    }
}
