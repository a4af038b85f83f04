#!/usr/bin/env python3
"""
Polytrope Command Line
======================
Kleene stars, multivariate volume / Ehrhart / h*-polynomials, oracle
verification and batch processing from the shell.

    python polytrope_cli.py kleene matrix.txt
    python polytrope_cli.py polynomials --which hstar --evaluate --inline "0 3 2; 3 0 4; 5 6 0"
    python polytrope_cli.py verify --depth full matrix.txt
    python polytrope_cli.py batch data/representatives_3d.txt --format json

Results go to stdout, status lines to stderr. Exit codes: 0 success,
1 verification failure, 2 negative cycle, 3 non-Kleene or malformed input,
4 enumeration cap exceeded.
"""

import argparse
import json
import logging
import sys
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Dict, List, Optional, Sequence, Tuple

import pandas as pd

from cohomology_volume_integrator import polytrope_vertices
from ehrhart_todd_transformer import PolynomialTriple, polynomial_triple, univariate
from exact_polynomial_algebra import format_fraction, render, to_json
from polytrope_config import ParseError, PolytropeConfig, PolytropeError
from polytrope_verifier import run_verification
from tropical_weight_matrix import WeightMatrix, kleene_star, parse_matrix, require_kleene

logger = logging.getLogger(__name__)

WHICH_CHOICES = ("volume", "ehrhart", "hstar", "all")
MODE_CHOICES = ("multivariate", "univariate", "evaluate")


def _status(message: str) -> None:
    print(message, file=sys.stderr)


# ---------------------------------------------------------------------------
# Input
# ---------------------------------------------------------------------------

def read_matrix_text(path: Optional[str], inline: Optional[str]) -> str:
    """Matrix text from --inline ('; ' separates rows), a file, or stdin ('-')."""
    if inline is not None:
        return inline.replace(";", "\n")
    if path is None or path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}") from e


def prepare_matrix(text: str, star: bool = False) -> WeightMatrix:
    """Parse a matrix; with star=True replace it by its Kleene star, else insist it is one."""
    W = parse_matrix(text)
    if star:
        return kleene_star(W)
    require_kleene(W)
    return W


def read_batch(text: str) -> List[Tuple[str, str]]:
    """
    Records of a batch file: a JSON list of 2-D arrays, or whitespace matrices
    separated by blank lines, each optionally preceded by '# label' lines.
    """
    stripped = text.strip()
    if not stripped:
        return []
    if stripped.startswith("["):
        try:
            matrices = json.loads(stripped)
        except ValueError as e:
            raise ParseError(f"cannot parse batch JSON: {e}") from e
        return [(f"#{i + 1}", json.dumps(m)) for i, m in enumerate(matrices)]

    records = []
    label, rows = None, []
    for line in text.splitlines() + [""]:
        line = line.strip()
        if line.startswith("#"):
            label = line.lstrip("#").strip() or label
        elif line:
            rows.append(line)
        elif rows:
            records.append((label or f"#{len(records) + 1}", "\n".join(rows)))
            label, rows = None, []
    return records


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_kleene(W: WeightMatrix) -> Tuple[WeightMatrix, bool]:
    """The Kleene star of W and whether W already was one."""
    star = kleene_star(W)
    return star, star == W


def _polynomial_outputs(triple: PolynomialTriple, which: str, mode: str, euclidean: bool,
                        dilate: int) -> Dict[str, object]:
    """Rendered (text) and JSON forms of the requested polynomials."""
    W = triple.source_weight
    volume = triple.volume.euclidean if euclidean else triple.volume.normalized
    kinds = ("volume", "ehrhart", "hstar") if which == "all" else (which,)
    outputs = {}
    for kind in kinds:
        if mode == "multivariate":
            if kind == "volume":
                outputs[kind] = (render(volume), to_json(volume))
            elif kind == "ehrhart":
                outputs[kind] = (render(triple.ehrhart.multivariate), to_json(triple.ehrhart.multivariate))
            else:
                coefficients = triple.hstar.coefficients
                outputs[kind] = (str(triple.hstar), [to_json(h) for h in coefficients])
        elif mode == "univariate":
            if kind == "hstar":
                uni = univariate(triple.hstar, W)
            else:
                uni = univariate(volume if kind == "volume" else triple.ehrhart.multivariate, W)
            outputs[kind] = (uni.render(), uni.to_json())
        else:
            if kind == "volume":
                normalized, euclid = triple.volume.value(W), triple.volume.euclidean_value(W)
                outputs[kind] = (f"{format_fraction(normalized)} (normalized), {format_fraction(euclid)} (euclidean)",
                                 {'normalized': format_fraction(normalized), 'euclidean': format_fraction(euclid)})
            elif kind == "ehrhart":
                count = triple.ehrhart.count(W, dilate)
                outputs[kind] = (format_fraction(count), {'dilate': dilate, 'points': format_fraction(count)})
            else:
                values = [format_fraction(h) for h in triple.hstar.evaluate_at(W)]
                outputs[kind] = (" ".join(values), values)
    return outputs


def cmd_polynomials(W: WeightMatrix, which: str = "all", mode: str = "multivariate",
                    euclidean: bool = False, dilate: int = 1, fmt: str = "text") -> str:
    if which not in WHICH_CHOICES or mode not in MODE_CHOICES:
        raise ValueError(f"unsupported request {which}/{mode}")
    triple = polynomial_triple(W)
    if triple.volume.tie_flag:
        _status("⚠️ weight vector lies on the boundary of a Groebner cone; using the refined order")
    outputs = _polynomial_outputs(triple, which, mode, euclidean, dilate)
    if fmt == "json":
        return json.dumps({'matrix': W.to_list(), 'mode': mode,
                           **{kind: data for kind, (_, data) in outputs.items()}}, indent=2)
    if len(outputs) == 1:
        return next(iter(outputs.values()))[0]
    return "\n".join(f"{kind}: {text}" for kind, (text, _) in outputs.items())


def cmd_verify(W: WeightMatrix, depth: str = "full", cap: Optional[int] = None,
               threads: Optional[int] = None, fmt: str = "text") -> Tuple[str, int]:
    report = run_verification(W, depth, cap, threads)
    code = PolytropeConfig.EXIT_OK if report.passed else PolytropeConfig.EXIT_VERIFY_FAILED
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2), code
    lines = [f"{c.marker} {c.name}: {c.detail}" for c in report.checks]
    lines.append(report.summary_line())
    return "\n".join(lines), code


def cmd_vertices(W: WeightMatrix) -> List[Tuple[int, ...]]:
    return polytrope_vertices(W)


def _batch_record(label: str, text: str, star: bool, depth: Optional[str],
                  cap: Optional[int], threads: Optional[int]) -> Dict:
    try:
        W = prepare_matrix(text, star)
        triple = polynomial_triple(W)
        record = {
            'status': 'success',
            'label': label,
            'matrix': W.to_list(),
            'n': W.n,
            'maximal': not triple.volume.tie_flag,
            'volume': render(triple.volume.normalized),
            'ehrhart': render(triple.ehrhart.multivariate),
            'hstar': str(triple.hstar),
            'volume_at_c': format_fraction(triple.volume.value()),
            'points': format_fraction(triple.ehrhart.count(W)),
            'hstar_at_c': [format_fraction(h) for h in triple.hstar.evaluate_at(W)],
        }
        if depth is not None:
            report = run_verification(W, depth, cap, threads)
            record['verify'] = report.summary_line()
            record['verified'] = report.passed
        return record
    except PolytropeError as e:
        return {'status': 'error', 'label': label, 'message': str(e), 'exit_code': e.exit_code}
    except (ValueError, ArithmeticError) as e:
        logger.error(f"batch record {label} failed: {e}")
        return {'status': 'error', 'label': label, 'message': str(e),
                'exit_code': PolytropeConfig.EXIT_VERIFY_FAILED}


def cmd_batch(text: str, star: bool = False, depth: Optional[str] = "quick", cap: Optional[int] = None,
              threads: Optional[int] = None) -> List[Dict]:
    """One record per matrix, in input order; failures are recorded and the batch continues."""
    records = read_batch(text)
    workers = PolytropeConfig.get_thread_count(threads)
    results: List[Optional[Dict]] = [None] * len(records)
    start = time.time()
    with ThreadPoolExecutor(max_workers=workers) as executor:
        future_to_index = {
            executor.submit(_batch_record, label, block, star, depth, cap, None): idx
            for idx, (label, block) in enumerate(records)
        }
        for future in as_completed(future_to_index):
            idx = future_to_index[future]
            results[idx] = future.result()
            logger.info(f"batch record {idx + 1}/{len(records)} done ({results[idx]['status']})")
    logger.info(f"batch of {len(records)} matrices finished in {time.time() - start:.2f}s")
    return results


def batch_summary(results: Sequence[Dict]) -> pd.DataFrame:
    rows = []
    for record in results:
        if record['status'] == 'success':
            rows.append({'label': record['label'], 'n': record['n'], 'maximal': record['maximal'],
                         'Vol(c)': record['volume_at_c'], 'points': record['points'],
                         'h*': " ".join(record['hstar_at_c']), 'verify': record.get('verify', '-')})
        else:
            rows.append({'label': record['label'], 'n': None, 'maximal': None, 'Vol(c)': None,
                         'points': None, 'h*': None, 'verify': f"error: {record['message']}"})
    return pd.DataFrame(rows)


def _format_batch_text(results: Sequence[Dict]) -> str:
    blocks = []
    for record in results:
        if record['status'] == 'success':
            blocks.append("\n".join([
                f"[{record['label']}] n={record['n']}",
                f"volume: {record['volume']}",
                f"ehrhart: {record['ehrhart']}",
                f"hstar: {record['hstar']}",
            ]))
        else:
            blocks.append(f"[{record['label']}] error: {record['message']}")
    if results:
        blocks.append(batch_summary(results).to_string(index=False))
    return "\n\n".join(blocks)


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", "-v", action="store_true", help="log pipeline timings")
    common.add_argument("--format", choices=("text", "json"), default="text")

    parser = argparse.ArgumentParser(description="Volume, Ehrhart and h*-polynomials of polytropes")
    sub = parser.add_subparsers(dest="command", required=True)

    def matrix_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("matrix", nargs="?", help="matrix file ('-' for stdin)")
        p.add_argument("--inline", help="matrix rows separated by ';'")
        p.add_argument("--star", action="store_true", help="replace the input by its Kleene star")

    kleene = sub.add_parser("kleene", parents=[common], help="Kleene star of a weight matrix")
    matrix_args(kleene)

    polys = sub.add_parser("polynomials", parents=[common], help="volume, Ehrhart and h*-polynomials")
    matrix_args(polys)
    polys.add_argument("--which", choices=WHICH_CHOICES, default="all")
    scale_group = polys.add_mutually_exclusive_group()
    scale_group.add_argument("--normalized", dest="euclidean", action="store_false", default=False)
    scale_group.add_argument("--euclidean", dest="euclidean", action="store_true")
    mode_group = polys.add_mutually_exclusive_group()
    mode_group.add_argument("--univariate", dest="mode", action="store_const", const="univariate")
    mode_group.add_argument("--evaluate", dest="mode", action="store_const", const="evaluate")
    polys.add_argument("--dilate", type=int, default=1, help="dilate counted by --evaluate")
    polys.set_defaults(mode="multivariate")

    def oracle_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--cap", type=int, default=PolytropeConfig.ENUMERATION_CAP,
                       help="largest enumeration box per dilate")
        p.add_argument("--threads", type=int, default=PolytropeConfig.DEFAULT_THREADS)

    verify = sub.add_parser("verify", parents=[common], help="cross-check the pipeline against lattice point enumeration")
    matrix_args(verify)
    verify.add_argument("--depth", choices=PolytropeConfig.VERIFY_DEPTHS, default="full")
    oracle_args(verify)

    batch = sub.add_parser("batch", parents=[common], help="process a file of matrices")
    batch.add_argument("file", help="batch file ('-' for stdin)")
    batch.add_argument("--star", action="store_true")
    batch.add_argument("--depth", choices=PolytropeConfig.VERIFY_DEPTHS + ("none",), default="quick")
    oracle_args(batch)

    vertices = sub.add_parser("vertices", parents=[common], help="vertices of the polytrope")
    matrix_args(vertices)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        if args.command == "batch":
            results = cmd_batch(read_matrix_text(args.file, None), args.star,
                                None if args.depth == "none" else args.depth, args.cap, args.threads)
            if args.format == "json":
                print(json.dumps(results, indent=2))
            elif results:
                print(_format_batch_text(results))
            failed = [r for r in results if r['status'] != 'success' or not r.get('verified', True)]
            for record in failed:
                _status(f"❌ {record['label']}: {record.get('message') or record.get('verify')}")
            if not failed:
                _status(f"✅ {len(results)} matrices processed")
            return PolytropeConfig.EXIT_VERIFY_FAILED if failed else PolytropeConfig.EXIT_OK

        text = read_matrix_text(args.matrix, args.inline)
        if args.command == "kleene":
            star, already = cmd_kleene(parse_matrix(text))
            print(json.dumps(star.to_list()) if args.format == "json" else star.to_text())
            _status("✅ already a Kleene star" if already else "✅ Kleene star computed")
            return PolytropeConfig.EXIT_OK

        W = prepare_matrix(text, args.star)
        if args.command == "polynomials":
            print(cmd_polynomials(W, args.which, args.mode, args.euclidean, args.dilate, args.format))
            return PolytropeConfig.EXIT_OK
        if args.command == "verify":
            output, code = cmd_verify(W, args.depth, args.cap, args.threads, args.format)
            print(output)
            return code
        if args.command == "vertices":
            vertices = cmd_vertices(W)
            if args.format == "json":
                print(json.dumps([list(v) for v in vertices]))
            else:
                print("\n".join(" ".join(str(x) for x in v) for v in vertices))
            expected = PolytropeConfig.expected_vertex_count(W.n)
            marker = "✅" if len(vertices) == expected else "⚠️"
            _status(f"{marker} {len(vertices)} vertices (maximal polytropes have {expected})")
            return PolytropeConfig.EXIT_OK
    except PolytropeError as e:
        _status(f"❌ {e}")
        return e.exit_code
    return PolytropeConfig.EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
