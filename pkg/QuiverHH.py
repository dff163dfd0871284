#!/usr/bin/env python3
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any, Callable

from rich.console import Console

from quiverhh_algebra import (
    BoundAlgebra,
    build_algebra,
    check_admissibility,
    has_trivial_loops_only,
    is_schurian,
)
from quiverhh_compare import (
    build_context,
    check_associated_sequences,
    check_t_invariance,
    check_trivial_absorption,
    epsilon_check,
    induced_hh_map,
    injectivity_report,
    kernel_complex_cohomology,
    phi_matrix,
    phi_rank,
    verify_chain_map,
    verify_contraction,
)
from quiverhh_config import OUTPUT_FORMATS, FieldSpec, RunConfig, load_defaults_from_env
from quiverhh_core import LinalgError, ModelError, ParseError, StatusCallback, yes_no
from quiverhh_hochschild import hochschild_dims
from quiverhh_homotopy import LEFT, RIGHT, build_sigma, compute_classes, find_compatible_family
from quiverhh_inputs import load_poset, load_presentation, serialize_poset
from quiverhh_oracles import oracle_bar_dims
from quiverhh_poset import incidence_presentation, iz_reduce, simplicial_cohomology_dims
from quiverhh_quiver import Presentation, is_connected

Command = Callable[[RunConfig, Console, StatusCallback | None], int]


def _make_console(stderr: bool = False) -> Console:
    return Console(stderr=stderr, highlight=False, color_system=None, soft_wrap=True)


def _say(console: Console, line: str) -> None:
    console.print(line, markup=False, highlight=False)


def _emit(config: RunConfig, console: Console, lines: list[str], record: dict[str, Any]) -> None:
    if config.output_format == "records":
        console.print_json(data=record, highlight=False)
        return
    for line in lines:
        _say(console, line)


def _load_algebra(config: RunConfig, on_status: StatusCallback | None) -> BoundAlgebra:
    """A `.bqp` file, or a `.poset` file through its incidence presentation."""

    path = config.input_path
    if path.suffix == ".poset":
        presentation: Presentation = incidence_presentation(load_poset(path, on_status=on_status))
    else:
        presentation = load_presentation(path, on_status=on_status)
    return build_algebra(presentation, config.field, on_status=on_status)


def _cmd_check(config: RunConfig, console: Console, on_status: StatusCallback | None) -> int:
    a = _load_algebra(config, on_status)
    quiver = a.quiver
    admissibility = check_admissibility(a)
    classes = compute_classes(a, on_status=on_status)

    lines = [
        f"vertices: {len(quiver.vertices)}",
        f"arrows: {len(quiver.arrows)}",
        f"bound: {a.bound}",
        f"dim A: {a.dim}",
        f"connected: {yes_no(is_connected(quiver))}",
        f"generators in F^2: {yes_no(admissibility.generators_in_f2)}",
        f"bound implied by relations: {yes_no(admissibility.bound_implied)}",
        f"note: {admissibility.caveat}",
    ]
    if not admissibility.bound_implied:
        lines.append("unimplied paths: " + ", ".join(str(p) for p in admissibility.unimplied_paths))

    record: dict[str, Any] = {
        "command": "check",
        "vertices": len(quiver.vertices),
        "arrows": len(quiver.arrows),
        "bound": a.bound,
        "dim_A": a.dim,
        "connected": is_connected(quiver),
        "generators_in_f2": admissibility.generators_in_f2,
        "bound_implied": admissibility.bound_implied,
        "unimplied_paths": [str(p) for p in admissibility.unimplied_paths],
        "admissibility_note": admissibility.caveat,
        "homotopy_coherent": classes.coherent,
    }
    if classes.coherent:
        sigma = build_sigma(classes)
        right = find_compatible_family(classes, sigma, RIGHT, on_status=on_status)
        left = find_compatible_family(classes, sigma, LEFT, on_status=on_status)
        lines += [
            "homotopy coherent: yes",
            f"right compatible: {yes_no(right is not None)}",
            f"left compatible: {yes_no(left is not None)}",
        ]
        record["right_compatible"] = right is not None
        record["left_compatible"] = left is not None
    else:
        evidence, outlier = classes.witness
        lines += [
            f"homotopy coherent: no ({evidence} in I, {outlier} not in I)",
            "right compatible: n/a",
            "left compatible: n/a",
        ]
        record["witness"] = [str(evidence), str(outlier)]
    lines += [
        f"schurian: {yes_no(is_schurian(a))}",
        f"dim A(x,x) = 1 for all x: {yes_no(has_trivial_loops_only(a))}",
    ]
    record["schurian"] = is_schurian(a)
    record["trivial_loops_only"] = has_trivial_loops_only(a)
    _emit(config, console, lines, record)
    return 0


def _cmd_poset(config: RunConfig, console: Console, on_status: StatusCallback | None) -> int:
    a = _load_algebra(config, on_status)
    sigma = build_sigma(compute_classes(a, on_status=on_status))
    poset = sigma.poset
    edges = poset.hasse_edges()

    lines = [f"elements: {poset.size}"]
    for element, name in enumerate(poset.elements):
        members = ", ".join(str(m) for m in sigma.members(element))
        lines.append(f"  {name}: {members}")
    lines.append(f"hasse edges: {len(edges)}")
    lines += [f"  {upper} > {lower}" for upper, lower in edges]

    record = {
        "command": "poset",
        "elements": [
            {"name": name, "members": [str(m) for m in sigma.members(i)]}
            for i, name in enumerate(poset.elements)
        ],
        "hasse_edges": [list(edge) for edge in edges],
    }
    _emit(config, console, lines, record)
    return 0


def _dims_output(config: RunConfig, console: Console, label: str, command: str, dims: list[int]) -> int:
    lines = [f"{label}^{n} = {d}" for n, d in enumerate(dims)]
    _emit(config, console, lines, {"command": command, "field": str(config.field), "dims": dims})
    return 0


def _cmd_hh(config: RunConfig, console: Console, on_status: StatusCallback | None) -> int:
    a = _load_algebra(config, on_status)
    dims = hochschild_dims(a, config.max_degree, threads=config.threads, on_status=on_status)
    return _dims_output(config, console, "HH", "hh", dims)


def _cmd_oracle_hh(config: RunConfig, console: Console, on_status: StatusCallback | None) -> int:
    a = _load_algebra(config, on_status)
    dims = oracle_bar_dims(a, config.max_degree, on_status=on_status)
    return _dims_output(config, console, "HH", "oracle-hh", dims)


def _cmd_sh(config: RunConfig, console: Console, on_status: StatusCallback | None) -> int:
    poset = load_poset(config.input_path, on_status=on_status)
    dims = simplicial_cohomology_dims(poset, config.max_degree, config.field)
    return _dims_output(config, console, "SH", "sh", dims)


def _cmd_reduce(config: RunConfig, console: Console, on_status: StatusCallback | None) -> int:
    reduced = iz_reduce(load_poset(config.input_path, on_status=on_status), on_status=on_status)
    if config.output_format == "records":
        record = {
            "command": "reduce",
            "elements": list(reduced.elements),
            "hasse_edges": [list(edge) for edge in reduced.hasse_edges()],
        }
        console.print_json(data=record, highlight=False)
    else:
        console.print(serialize_poset(reduced), end="", markup=False, highlight=False)
    return 0


def _cmd_compare(config: RunConfig, console: Console, on_status: StatusCallback | None) -> int:
    a = _load_algebra(config, on_status)
    ctx = build_context(a, on_status=on_status)
    top = config.max_degree
    names = ctx.poset.elements
    lines = [f"associated poset: {ctx.poset.size} elements"]
    record: dict[str, Any] = {"command": "compare", "field": str(config.field), "degrees": []}

    if ctx.family is None:
        lines.append("right compatible family: none")
    else:
        lines.append("right compatible family:")
        lines += [
            f"  u({names[s]}, {names[t]}) = {path}" for (s, t), path in sorted(ctx.family.choices.items())
        ]
    record["family"] = (
        None
        if ctx.family is None
        else [[names[s], names[t], str(path)] for (s, t), path in sorted(ctx.family.choices.items())]
    )

    for n in range(top + 1):
        phi = phi_matrix(ctx, n)
        rank_n = phi_rank(ctx, n)
        induced = induced_hh_map(ctx, n)
        hypotheses = injectivity_report(ctx, n)
        lines.append(
            f"degree {n}: Phi^{n} {phi.shape[0]}x{phi.shape[1]}, rank {rank_n}, "
            f"surjective: {yes_no(rank_n == phi.shape[0])}"
        )
        lines.append(
            f"  HH(Phi^{n}): SH^{n} = {induced.domain_dim}, HH^{n} = {induced.codomain_dim}, "
            f"rank {induced.rank}, {induced.verdict}"
        )
        if hypotheses.hypotheses_hold:
            lines.append(f"  injectivity hypotheses: yes, conclusion: {yes_no(hypotheses.conclusion_holds)}")
        else:
            lines.append("  injectivity hypotheses: no")
        record["degrees"].append(
            {
                "degree": n,
                "phi_shape": list(phi.shape),
                "phi_rank": rank_n,
                "sh": induced.domain_dim,
                "hh": induced.codomain_dim,
                "induced_rank": induced.rank,
                "verdict": induced.verdict,
                "hypotheses_hold": hypotheses.hypotheses_hold,
            }
        )

    failed = False
    chain_map = verify_chain_map(ctx, top, on_status=on_status)
    lines.append(f"chain map: {'pass' if chain_map.passed else 'FAIL ' + chain_map.violation}")
    record["chain_map"] = chain_map.passed
    failed |= not chain_map.passed
    invariance = check_t_invariance(ctx, top)
    lines.append(
        f"block-mate invariance: {'pass' if invariance.passed else 'FAIL ' + invariance.violation}"
        f" ({invariance.checked} substitutions)"
    )
    record["block_mate_invariance"] = invariance.passed
    failed |= not invariance.passed
    if ctx.family is None:
        lines.append("contraction: unavailable (no right compatible family)")
        record["contraction"] = None
    else:
        sequences = check_associated_sequences(ctx)
        lines.append(
            "associated sequences: " + ("pass" if not sequences else "FAIL " + ctx.describe(sequences[0]))
        )
        record["associated_sequences"] = not sequences
        failed |= bool(sequences)
        contraction = verify_contraction(ctx, top, on_status=on_status)
        lines.append(f"contraction: {'pass' if contraction.passed else 'FAIL ' + contraction.violation}")
        record["contraction"] = contraction.passed
        failed |= not contraction.passed
        if contraction.passed:
            kernel_dims = kernel_complex_cohomology(ctx, top)
            lines.append("Ker Phi cohomology: " + " ".join(str(d) for d in kernel_dims))
            record["kernel_cohomology"] = kernel_dims

    absorbing = check_trivial_absorption(ctx)
    lines.append(
        "trivial factors: " + ("pass" if not absorbing else f"FAIL {absorbing[0][0]} absorbs {absorbing[0][1]}")
    )
    record["trivial_factors"] = not absorbing
    failed |= bool(absorbing)
    if config.input_path.suffix == ".poset":
        epsilon = epsilon_check(load_poset(config.input_path), top, config.field, on_status=on_status)
        lines.append(f"epsilon: {'pass' if epsilon.passed else 'FAIL'}")
        record["epsilon"] = epsilon.passed
        failed |= not epsilon.passed

    _emit(config, console, lines, record)
    return 3 if failed else 0


def _add_common(parser: argparse.ArgumentParser, defaults) -> None:
    parser.add_argument("input", help="Input file (.bqp presentation or .poset)")
    parser.add_argument("--max-degree", type=int, default=defaults.max_degree, help="Highest degree N")
    parser.add_argument("--field", default=None, help="q or fp:<prime> (default: QUIVERHH_FIELD or q)")
    parser.add_argument("--threads", type=int, default=defaults.threads, help="Worker threads for matrix assembly")
    parser.add_argument("--format", dest="output_format", choices=OUTPUT_FORMATS, default=defaults.output_format)
    parser.add_argument("--verbose", action="store_true", default=defaults.verbose, help="Progress lines on stderr")


def _build_parser() -> argparse.ArgumentParser:
    defaults = load_defaults_from_env()
    parser = argparse.ArgumentParser(
        prog="quiverhh",
        description="QuiverHH  Hochschild cohomology of bound quiver algebras and their associated posets",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    commands: list[tuple[str, str, Command]] = [
        ("check", "Admissibility, homotopy coherence, compatibility, schurian", _cmd_check),
        ("poset", "Print the associated poset of a coherent presentation", _cmd_poset),
        ("hh", "Hochschild cohomology dimensions from the reduced complex", _cmd_hh),
        ("sh", "Simplicial cohomology dimensions of a poset", _cmd_sh),
        ("reduce", "Reduce a poset by deleting thin interior elements", _cmd_reduce),
        ("compare", "Build and verify the comparison morphism and its induced maps", _cmd_compare),
        ("oracle-hh", "Hochschild cohomology from the full bar complex (small algebras only)", _cmd_oracle_hh),
    ]
    for name, help_text, func in commands:
        p_cmd = sub.add_parser(name, help=help_text)
        _add_common(p_cmd, defaults)
        p_cmd.set_defaults(func=func, default_field=defaults.field)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        input_path=Path(args.input).expanduser(),
        max_degree=args.max_degree,
        field=FieldSpec.parse(args.field) if args.field else args.default_field,
        threads=args.threads,
        output_format=args.output_format,
        verbose=args.verbose,
    )


def main(argv: list[str] | None = None, console: Console | None = None, err_console: Console | None = None) -> int:
    console = console or _make_console()
    err_console = err_console or _make_console(stderr=True)
    try:
        parser = _build_parser()
    except ValueError as error:
        _say(err_console, f"Config error: {error}")
        return 2
    args = parser.parse_args(argv)

    try:
        config = _config_from_args(args)
    except ValueError as error:
        _say(err_console, f"Input error: {error}")
        return 2

    def on_status(message: str) -> None:
        _say(err_console, message)

    try:
        return int(args.func(config, console, on_status if config.verbose else None))
    except ParseError as error:
        _say(err_console, f"Parse error: {error}")
        return 2
    except OSError as error:
        _say(err_console, f"Input error: {error}")
        return 2
    except (ModelError, LinalgError) as error:
        _say(err_console, f"Model error: {error}")
        return 3
    except KeyboardInterrupt:
        _say(err_console, "Cancelled by user.")
        return 130


if __name__ == "__main__":
    sys.exit(main())
