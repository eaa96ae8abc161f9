"""Command-line workflows over ice-quiver-with-potential documents.

Exit codes: 0 success / check passed, 1 check failed, 2 malformed input,
3 unsupported operation (non-mutable vertex, degenerate reduction, oversized
truncation).  Failures print one line `error: <kind>: <detail>` to stderr.
"""

import functools
import json
import sys

import click

from .dg import (boundary_h0_dims, build_ginzburg_functor, build_pi2,
                 build_relative_ginzburg, check_d_squared, h0_dims,
                 jacobian_quotient, presentation, presentation_text)
from .errors import (DocumentError, IQPError, NotMutableError, ReductionError,
                     TruncationError)
from .io import (canonical_relabel, dumps_document, encode_document,
                 read_document, validation_payload)
from .mutation import IQP, mutate, premutate, reduce
from .pjcomplex import build_pj_complex, check_complex, exactness_profile
from .quiver import check_mutable, ice_quiver_isomorphic, to_dot, validate_ice_quiver
from .series import Potential


def _die(code, kind, detail):
    click.echo(f"error: {kind}: {detail}", err=True)
    sys.exit(code)


def _translate_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except DocumentError as e:
            _die(2, "malformed", e)
        except NotMutableError as e:
            _die(3, "unsupported", e)
        except (ReductionError, TruncationError) as e:
            _die(3, "unsupported", e)
        except IQPError as e:
            _die(2, "malformed", e)
    return wrapper


def _with_truncation(iqp, n):
    if n is None or n == iqp.potential.truncation:
        return iqp
    return IQP(iqp.ice_quiver,
               Potential(iqp.ice_quiver.quiver, iqp.potential.terms, n))


def _emit(payload):
    click.echo(json.dumps(payload, indent=2, ensure_ascii=False))


_truncate_option = click.option(
    "-N", "--truncate", type=int, default=None,
    help="Override the document's truncation degree.")


@click.group()
def main():
    """Symbolic computations with ice quivers with potential."""


@main.command()
@click.argument("file", type=click.Path())
@_translate_errors
def validate(file):
    """Check a document and report loops, 2-cycles, and mutability."""
    iqp = read_document(file)
    payload = validation_payload(iqp.ice_quiver)
    _emit(payload)
    sys.exit(0 if payload["ok"] else 1)


@main.command("mutate")
@click.argument("file", type=click.Path())
@click.option("-v", "--vertex", "vertices", multiple=True, required=True,
              help="Vertex to mutate at (repeat for a sequence).")
@click.option("--canonical", is_flag=True,
              help="Relabel the result deterministically before printing.")
@_translate_errors
def mutate_cmd(file, vertices, canonical):
    """Mutate at one or more vertices and print the resulting document."""
    iqp = read_document(file)
    for v in vertices:
        iqp = mutate(iqp, v)
    if canonical:
        iqp = canonical_relabel(iqp)
    click.echo(dumps_document(encode_document(iqp)), nl=False)


@main.command("premutate")
@click.argument("file", type=click.Path())
@click.option("-v", "--vertex", required=True)
@_translate_errors
def premutate_cmd(file, vertex):
    """Apply the premutation (no reduction) and print the document."""
    iqp = read_document(file)
    click.echo(dumps_document(encode_document(premutate(iqp, vertex))), nl=False)


@main.command("reduce")
@click.argument("file", type=click.Path())
@_translate_errors
def reduce_cmd(file):
    """Split off the trivial part of the potential and print the document."""
    iqp = read_document(file)
    click.echo(dumps_document(encode_document(reduce(iqp)[0])), nl=False)


@main.command("ginzburg")
@click.argument("file", type=click.Path())
@_truncate_option
@click.option("--text", is_flag=True, help="Human-readable presentation.")
@_translate_errors
def ginzburg_cmd(file, truncate, text):
    """Print the presentation of the complete relative Ginzburg dg algebra."""
    iqp = _with_truncation(read_document(file), truncate)
    dga = build_relative_ginzburg(iqp, iqp.truncation)
    if text:
        click.echo(presentation_text(dga), nl=False)
    else:
        _emit(presentation(dga))


@main.command("pi2")
@click.argument("file", type=click.Path())
@_truncate_option
@click.option("--text", is_flag=True, help="Human-readable presentation.")
@_translate_errors
def pi2_cmd(file, truncate, text):
    """Print the derived preprojective algebra of the frozen subquiver."""
    iqp = _with_truncation(read_document(file), truncate)
    dga = build_pi2(iqp.ice_quiver, iqp.truncation)
    if text:
        click.echo(presentation_text(dga), nl=False)
    else:
        _emit(presentation(dga))


@main.command("check")
@click.argument("file", type=click.Path())
@click.argument("kind", type=click.Choice(["d2", "h0", "boundary", "pj",
                                           "involution"]))
@click.option("-v", "--vertex", default=None,
              help="Vertex for the involution check.")
@_truncate_option
@_translate_errors
def check_cmd(file, kind, vertex, truncate):
    """Run a verification and print a JSON report; exit 0 iff it passes."""
    iqp = _with_truncation(read_document(file), truncate)
    n = iqp.truncation
    payload = {"check": kind, "truncation": n}
    if kind == "d2":
        gamma = check_d_squared(build_relative_ginzburg(iqp, n))
        pi2 = check_d_squared(build_pi2(iqp.ice_quiver, n))
        try:
            build_ginzburg_functor(iqp, n)
            functor_ok = True
        except IQPError:
            functor_ok = False
        payload.update({
            "gamma_ok": gamma.ok, "pi2_ok": pi2.ok, "functor_ok": functor_ok,
            "first_counterexample": (
                None if gamma.ok else repr(gamma.first_counterexample)),
            "ok": gamma.ok and pi2.ok and functor_ok,
        })
    elif kind == "h0":
        gamma_dims = h0_dims(build_relative_ginzburg(iqp, n), n)
        jac_dims = jacobian_quotient(iqp, n).dims
        cut = max(n - 1, 0)
        payload.update({
            "h0_dims": gamma_dims, "jacobian_dims": jac_dims,
            "ok": gamma_dims[:cut] == jac_dims[:cut],
        })
    elif kind == "boundary":
        q = jacobian_quotient(iqp, n)
        dims = boundary_h0_dims(iqp, n)
        payload.update({
            "dims": dims, "total": sum(dims), "stabilized": q.stabilized,
            "ok": q.stabilized,
        })
    elif kind == "pj":
        slices = build_pj_complex(iqp, n)
        report = check_complex(slices)
        profile = exactness_profile(slices)
        payload.update(profile.as_dict())
        payload.update({
            "ok": report.ok,
            "first_failure": None if report.ok else repr(report.first_failure),
        })
    else:  # involution
        if vertex is None:
            raise click.UsageError("the involution check needs -v VERTEX")
        base = reduce(iqp)[0]
        twice = mutate(mutate(iqp, vertex), vertex)
        iso = ice_quiver_isomorphic(base.ice_quiver, twice.ice_quiver)
        cut = max(n - 1, 0)
        base_dims = jacobian_quotient(base, n).dims[:cut]
        twice_dims = jacobian_quotient(twice, n).dims[:cut]
        payload.update({
            "isomorphic": iso is not None,
            "jacobian_dims_match": base_dims == twice_dims,
            "jacobian_dims": [base_dims, twice_dims],
            "ok": iso is not None and base_dims == twice_dims,
        })
    _emit(payload)
    sys.exit(0 if payload["ok"] else 1)


@main.command("dot")
@click.argument("file", type=click.Path())
@_translate_errors
def dot_cmd(file):
    """Print the quiver in DOT format (frozen parts marked)."""
    iqp = read_document(file)
    click.echo(to_dot(iqp.ice_quiver), nl=False)


@main.command("iso")
@click.argument("file1", type=click.Path())
@click.argument("file2", type=click.Path())
@_translate_errors
def iso_cmd(file1, file2):
    """Decide whether two documents have isomorphic ice quivers."""
    a = read_document(file1).ice_quiver
    b = read_document(file2).ice_quiver
    iso = ice_quiver_isomorphic(a, b)
    payload = {"isomorphic": iso is not None}
    if iso is not None:
        payload["vertex_map"] = dict(sorted(iso.vertex_map.items()))
        payload["arrow_map"] = dict(sorted(iso.arrow_map.items()))
    _emit(payload)
    sys.exit(0 if iso is not None else 1)


@main.command("corpus")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--count", type=int, default=10, show_default=True)
@_truncate_option
@_translate_errors
def corpus_cmd(seed, count, truncate):
    """Print a deterministic corpus of random mutable IQPs (JSON lines)."""
    from .corpus import corpus
    n = truncate if truncate is not None else 10
    for iqp, v in corpus(seed, count, n=n):
        line = {"vertex": v, "iqp": encode_document(iqp)}
        click.echo(json.dumps(line, ensure_ascii=False))


@main.command("report")
@click.argument("file", type=click.Path())
@click.option("--out", type=click.Path(), required=True,
              help="Directory for the CSV and PNG outputs.")
@_truncate_option
@_translate_errors
def report_cmd(file, out, truncate):
    """Write per-degree dimension tables (CSV) and plots (PNG)."""
    from .report import write_report
    iqp = _with_truncation(read_document(file), truncate)
    for path in write_report(iqp, out):
        click.echo(path)


@main.command("serve")
@click.option("--port", type=int, default=8175, show_default=True)
@click.option("--static", "static_dir", type=click.Path(), default=None,
              help="Also serve files from this directory (for the explorer UI).")
def serve_cmd(port, static_dir):
    """Serve the JSON-over-HTTP API for the explorer UI."""
    from .server import serve
    serve(port=port, static_dir=static_dir)


if __name__ == "__main__":
    main()
