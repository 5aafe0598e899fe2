"""Command-line client for the compilation service.

Each subcommand marshals its options into the service request models and
calls the FastAPI app, in-process by default or over HTTP with --server.
Output files are written atomically (temp file + rename).

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""
from __future__ import annotations

import asyncio
import json
import os
import sys
import tempfile

import click
import httpx


def _call(server: str | None, path: str, payload: dict) -> dict:
    if server:
        resp = httpx.post(server.rstrip("/") + path, json=payload, timeout=600.0)
    else:
        from .service.app import app

        async def go():
            transport = httpx.ASGITransport(app=app)
            async with httpx.AsyncClient(transport=transport,
                                         base_url="http://qramforge") as client:
                return await client.post(path, json=payload, timeout=600.0)

        resp = asyncio.run(go())
    if resp.status_code >= 400:
        try:
            detail = resp.json().get("detail", resp.text)
        except Exception:
            detail = resp.text
        raise click.UsageError(f"{path} failed ({resp.status_code}): {detail}")
    return resp.json()


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".qramforge-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_circuit(path: str) -> dict:
    with open(path) as handle:
        return json.load(handle)


server_option = click.option("--server", default=None,
                             help="Remote service URL (default: run in-process).")


@click.group()
def main():
    """Bucket brigade QRAM synthesis, lowering, scheduling and verification."""


@main.command()
@click.option("--q", "q", type=int, required=True, help="Address width.")
@click.option("--n", "n", type=int, default=None, help="Query exponent (default q).")
@click.option("--family", type=click.Choice(["toffoli", "sequential", "parallel"]),
              default="toffoli")
@click.option("--memory", default=None,
              help="Memory bits (2^q chars) or random:SEED; default all ones.")
@click.option("--fanin", type=click.Choice(["measurement", "unitary"]),
              default="measurement", help="FANIN mode for the parallel family.")
@click.option("-o", "--output", default=None, help="Output IR JSON file.")
@server_option
def synth(q, n, family, memory, fanin, output, server):
    """Build a QRAM circuit and write its IR document."""
    result = _call(server, "/v1/synth", {"q": q, "n": n, "family": family,
                                         "memory": memory, "fanin": fanin})
    text = json.dumps(result["circuit"], indent=2) + "\n"
    if output:
        _write_atomic(output, text)
    else:
        click.echo(text, nl=False)


@main.command()
@click.argument("file", type=click.Path(exists=True))
@click.option("--variant", type=click.Choice(
    ["canonical_7t", "parallel_shared_wire", "logical_and_compute"]),
    default="canonical_7t")
@click.option("--shared", default=None, help="Shared wire for parallel_shared_wire.")
@click.option("-o", "--output", default=None, help="Output IR JSON file.")
@server_option
def lower(file, variant, shared, output, server):
    """Lower every Toffoli in an IR file with the chosen decomposition."""
    result = _call(server, "/v1/lower", {"circuit": _read_circuit(file),
                                         "variant": variant, "shared": shared})
    text = json.dumps(result["circuit"], indent=2) + "\n"
    if output:
        _write_atomic(output, text)
    else:
        click.echo(text, nl=False)


@main.command()
@click.argument("file", type=click.Path(exists=True))
@click.option("--ghz-expand", is_flag=True, help="Expand fan-out CNOTs to GHZ trees first.")
@click.option("--moments", "show_moments", is_flag=True, help="Print per-moment gate indices.")
@server_option
def schedule(file, ghz_expand, show_moments, server):
    """Print scheduled depth (and per-region depths when tagged)."""
    result = _call(server, "/v1/schedule", {"circuit": _read_circuit(file),
                                            "ghz_expand": ghz_expand})
    out = {"depth": result["depth"], "wire_count": result["wire_count"],
           "region_depths": result["region_depths"]}
    if show_moments:
        out["moments"] = result["moments"]
    click.echo(json.dumps(out, indent=2))


@main.command()
@click.argument("file", type=click.Path(exists=True))
@click.option("--q", "q", type=int, required=True)
@click.option("--n", "n", type=int, default=None)
@click.option("--memory", default=None,
              help="Single memory (bits or random:SEED); default full sweep.")
@server_option
def verify(file, q, n, memory, server):
    """Run the brute-force oracle; exit 1 unless equivalent."""
    result = _call(server, "/v1/verify", {"circuit": _read_circuit(file), "q": q,
                                          "n": n, "memory": memory})
    click.echo(json.dumps(result, indent=2))
    if not result["equivalent"]:
        sys.exit(1)


@main.command()
@click.option("--families", default="bbs,rom,bbp",
              help="Comma-separated families (bbs,rom,bbp).")
@click.option("--q-range", default="2..8", help="Inclusive range, e.g. 2..15.")
@click.option("--n-policy", default="n_equals_q", help="n_equals_q or fixed:N.")
@click.option("--measure-cap", type=int, default=8,
              help="Largest q for which circuits are built and measured.")
@click.option("-o", "--output", default=None, help="Output CSV file.")
@server_option
def report(families, q_range, n_policy, measure_cap, output, server):
    """Emit the resource-model sweep CSV."""
    try:
        lo, hi = (int(v) for v in q_range.split(".."))
    except ValueError:
        raise click.UsageError(f"bad --q-range {q_range!r}, expected LO..HI")
    result = _call(server, "/v1/report", {"families": families.split(","),
                                          "q_lo": lo, "q_hi": hi,
                                          "n_policy": n_policy,
                                          "measure_cap": measure_cap})
    if output:
        _write_atomic(output, result["csv"])
    else:
        click.echo(result["csv"], nl=False)


@main.command()
@click.argument("file", type=click.Path(exists=True))
@server_option
def render(file, server):
    """Print the ASCII wire diagram."""
    result = _call(server, "/v1/render", {"circuit": _read_circuit(file)})
    click.echo(result["text"], nl=False)


@main.command()
@click.argument("file", type=click.Path(exists=True))
@click.option("-o", "--output", default=None, help="Output .qasm file.")
@server_option
def export(file, output, server):
    """Write OpenQASM 2.0."""
    result = _call(server, "/v1/export", {"circuit": _read_circuit(file)})
    if output:
        _write_atomic(output, result["qasm"])
    else:
        click.echo(result["qasm"], nl=False)


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host, port):
    """Run the compilation service with uvicorn."""
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
