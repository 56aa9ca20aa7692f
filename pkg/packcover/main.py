"""Main CLI entry point for packcover."""

import json
import sys
from pathlib import Path

import click

from . import __version__
from .game import LeastTactics, play_trace, solve_covering_game, solve_packing_game
from .parser import parse_pair, parse_pairtree, parse_size_range, serialize_pair
from .partition import solve_packing_covering
from .promises import Promise
from .suites import SUITES, SuiteSpec, run_suite
from .trees import assemble

EMIT = click.Choice(["text", "json"])


def _show(elements) -> str:
    return "{" + ",".join(sorted(elements)) + "}"


def _emit_json(data: dict) -> None:
    click.echo(json.dumps(data, sort_keys=True, indent=2))


@click.group()
@click.version_option(version=__version__)
def main():
    """Check finite Packing/Covering lemmas on matroid pairs and pair-trees.

    Examples:
        packcover verify blockstr                      # 4096-subset sweep
        packcover verify lemma27 --n 6 --trials 500 --seed 7
        packcover verify game --nodes 4 --workers 4 --emit json -o game.json
        packcover solve-game tree.txt --promise M- --trace
        packcover assemble tree.txt                    # print the assembled pair
        packcover packing-covering pair.txt            # split E into P and Q
    """


@main.command()
@click.argument("suite", type=click.Choice(list(SUITES)))
@click.option(
    "--n",
    "sizes",
    type=str,
    help='Ground sizes, or node-ground cap for tree suites (e.g. "6", "5-6", "3,5")',
)
@click.option("--nodes", type=int, default=3, help="Most nodes in a random pair-tree")
@click.option("--trials", type=int, default=100, help="Random instances per run")
@click.option("--seed", type=int, default=0, help="Seed (64-bit unsigned)")
@click.option("--emit", type=EMIT, default="text", help="Report format on stdout")
@click.option(
    "--output", "-o", type=click.Path(), help="Also write the JSON report to this file"
)
@click.option("--workers", "-j", type=int, default=1, help="Worker processes")
@click.option("--verbose", "-v", is_flag=True, help="Per-instance status on stderr")
@click.option("--timing", is_flag=True, help="Include wall time in JSON reports")
def verify(
    suite: str,
    sizes: str,
    nodes: int,
    trials: int,
    seed: int,
    emit: str,
    output: str,
    workers: int,
    verbose: bool,
    timing: bool,
):
    """Run a verification suite; exits with 1 if any instance fails.

    SUITE: one of the suite names listed above
    """
    try:
        size_set = parse_size_range(sizes) if sizes else None
        spec = SuiteSpec(
            suite,
            sizes=tuple(sorted(size_set)) if size_set else None,
            nodes=nodes,
            trials=trials,
            seed=seed,
            workers=workers,
            verbose=verbose,
            timing=timing,
        )
        report = run_suite(spec)

        if emit == "json":
            click.echo(report.to_json())
        else:
            click.echo(report.to_text())

        if output:
            Path(output).write_text(report.to_json() + "\n")
            if verbose:
                click.echo(f"Report written to {output}", err=True)

    except Exception as e:
        click.echo(f"Error: {e}", err=True)
        raise click.Abort() from e

    if not report.ok:
        sys.exit(1)


@main.command("solve-game")
@click.argument("tree_file", type=click.Path(exists=True, path_type=Path))
@click.option(
    "--promise",
    "-p",
    "promise_text",
    required=True,
    help="bot, M-, M+, N-, N+ or top; a trailing * plays the Covering game",
)
@click.option("--trace", is_flag=True, help="Replay one play of the solved game")
@click.option("--emit", type=EMIT, default="text", help="Output format")
def solve_game(tree_file: Path, promise_text: str, trace: bool, emit: str):
    """Decide who wins the game on a pair-tree.

    TREE_FILE: pair-tree in the node/edge/root format
    """
    try:
        pairtree = parse_pairtree(tree_file.read_text())
        promise = Promise.parse(promise_text)
        if promise.starred:
            result = solve_covering_game(pairtree, promise)
        else:
            result = solve_packing_game(pairtree, promise)

        transcript = None
        if trace:
            tactics = result.strategy
            if result.winner != tactics.player:
                tactics = LeastTactics(tactics.player, board=result.board)
            transcript = play_trace(
                result.board, promise, tactics, result.challenger, result.game
            )

        if emit == "json":
            data = result.to_dict()
            if transcript is not None:
                data["trace"] = transcript.to_dict()
            _emit_json(data)
            return

        click.echo(f"{result.game.capitalize()} game from {promise} at {pairtree.e}")
        click.echo(f"Winner: {result.winner}")
        click.echo("Winnable promises by node:")
        for node, promises in result.table.items():
            labels = ", ".join(p.label for p in sorted(promises, key=lambda p: p.index))
            click.echo(f"  {node}: {labels or '-'}")
        if result.winner == result.strategy.player:
            click.echo(f"{result.strategy.player} strategy:")
            for (node, p), tactic in result.strategy.tactics.items():
                phi = ", ".join(f"{f}={q}" for f, q in tactic.phi) or "no upper edges"
                click.echo(f"  {node} [{p}]: {phi}; wave {tactic.wave}")
        if transcript is not None:
            click.echo("Trace:")
            for move in transcript.moves:
                if move.tactic is not None:
                    click.echo(
                        f"  {move.player} at {move.state.node} attains {move.state.promise}"
                        f" with wave {move.tactic.wave}"
                    )
                else:
                    strong = [
                        side
                        for side, flag in (("M", move.m_strong), ("N", move.n_strong))
                        if flag
                    ]
                    kind = f" ({'/'.join(strong)}-strong)" if strong else ""
                    click.echo(f"  {move.player} challenges {move.edge}{kind}")
            click.echo(f"  {transcript.stuck} is stuck; {transcript.winner} wins")

    except Exception as e:
        click.echo(f"Error: {e}", err=True)
        raise click.Abort() from e


@main.command("assemble")
@click.argument("tree_file", type=click.Path(exists=True, path_type=Path))
@click.option("--emit", type=EMIT, default="text", help="Output format")
def assemble_command(tree_file: Path, emit: str):
    """Print the matroid pair a pair-tree assembles to.

    TREE_FILE: pair-tree in the node/edge/root format
    """
    try:
        pair = assemble(parse_pairtree(tree_file.read_text())).assembled
        if emit == "json":
            _emit_json({"pair": serialize_pair(pair), "fingerprint": pair.fingerprint()})
        else:
            click.echo(serialize_pair(pair), nl=False)

    except Exception as e:
        click.echo(f"Error: {e}", err=True)
        raise click.Abort() from e


@main.command("packing-covering")
@click.argument("pair_file", type=click.Path(exists=True, path_type=Path))
@click.option("--emit", type=EMIT, default="text", help="Output format")
def packing_covering(pair_file: Path, emit: str):
    """Split the ground set of a pair into a packable and a coverable part.

    PAIR_FILE: matroid pair in the ground/M/N format
    """
    try:
        pair = parse_pair(pair_file.read_text())
        partition = solve_packing_covering(pair)
        if emit == "json":
            _emit_json(partition.to_dict())
            return
        click.echo(f"P: {_show(partition.P)}")
        click.echo(f"  S_M: {_show(partition.packing.S_M)}")
        click.echo(f"  S_N: {_show(partition.packing.S_N)}")
        click.echo(f"Q: {_show(partition.Q)}")
        click.echo(f"  I_M: {_show(partition.I_M)}")
        click.echo(f"  I_N: {_show(partition.I_N)}")

    except Exception as e:
        click.echo(f"Error: {e}", err=True)
        raise click.Abort() from e


if __name__ == "__main__":
    main()
