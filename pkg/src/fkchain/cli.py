"""Command-line client for the chain service.

Every subcommand reads a JSON config file, posts it to the service (an
in-process instance by default, or a remote base URL via --server), and
writes the response.  Exit codes: 0 success, 2 configuration error,
3 numerical failure.
"""

from __future__ import annotations

import csv
import io
import json
import sys

import click
import httpx

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _request(server: str | None, endpoint: str, payload: dict) -> httpx.Response:
    if server:
        with httpx.Client(base_url=server, timeout=None) as client:
            return client.post(endpoint, json=payload)
    import asyncio

    from .service import create_app

    async def go():
        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(transport=transport, timeout=None,
                                     base_url="http://fkchain.local") as client:
            return await client.post(endpoint, json=payload)

    return asyncio.run(go())


def _load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)


def _post(server: str | None, endpoint: str, payload: dict) -> dict:
    resp = _request(server, endpoint, payload)
    if resp.status_code in (400, 422):
        click.echo(f"config error: {resp.text}", err=True)
        sys.exit(EXIT_CONFIG)
    if resp.status_code >= 300:
        click.echo(f"numerical failure: {resp.text}", err=True)
        sys.exit(EXIT_NUMERICAL)
    return resp.json()


def _emit(doc: dict, out: str | None, fmt: str, csv_rows=None) -> None:
    if fmt == "csv":
        if csv_rows is None:
            click.echo("config error: this command has no CSV form", err=True)
            sys.exit(EXIT_CONFIG)
        header, rows = csv_rows
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(header)
        w.writerows(rows)
        text = buf.getvalue()
    else:
        text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


_shared = [
    click.option("--config", "config_path", required=True,
                 type=click.Path(exists=False), help="JSON config file."),
    click.option("--out", "out", default=None, help="Output file (default stdout)."),
    click.option("--format", "fmt", default="json",
                 type=click.Choice(["json", "csv"])),
    click.option("--threads", default=1, type=int, show_default=True),
    click.option("--server", default=None,
                 help="Remote service base URL (default: run in-process)."),
]


def shared_options(fn):
    for opt in reversed(_shared):
        fn = opt(fn)
    return fn


@click.group()
def main():
    """Soliton-chain entanglement pipeline."""


@main.command()
@shared_options
def solve(config_path, out, fmt, threads, server):
    """Relax a classical configuration and print its record."""
    doc = _post(server, "/solve", _load_config(config_path))
    if fmt == "csv":
        click.echo("config error: solve emits a structured-text record; use "
                   "--format json", err=True)
        sys.exit(EXIT_CONFIG)
    _emit(doc, out, fmt)


@main.command()
@shared_options
def modes(config_path, out, fmt, threads, server):
    """Fluctuation spectrum of a configuration."""
    doc = _post(server, "/modes", _load_config(config_path))
    rows = [(r["index"], repr(r["omega_sq"]), repr(r["omega"]), r["class"])
            for r in doc["rows"]]
    _emit(doc, out, fmt, (["index", "omega_sq", "omega", "class"], rows))


@main.command()
@shared_options
def entropy(config_path, out, fmt, threads, server):
    """Block entanglement entropy."""
    doc = _post(server, "/entropy", _load_config(config_path))
    rows = [(r.get("l", len(r.get("block", []))), repr(r["entropy"]))
            for r in doc["rows"]]
    _emit(doc, out, fmt, (["l", "entropy"], rows))


@main.command()
@shared_options
def negativity(config_path, out, fmt, threads, server):
    """Logarithmic negativity between two blocks."""
    doc = _post(server, "/negativity", _load_config(config_path))
    _emit(doc, out, fmt, (["log_negativity"], [(repr(doc["log_negativity"]),)]))


@main.command()
@shared_options
def squeeze(config_path, out, fmt, threads, server):
    """Distillable-entanglement bounds after mode squeezing."""
    doc = _post(server, "/squeeze", _load_config(config_path))
    rows = [(r.get("l", ""), repr(r["bound"])) for r in doc["rows"]]
    _emit(doc, out, fmt, (["l", "bound"], rows))


@main.command()
@shared_options
def sweep(config_path, out, fmt, threads, server):
    """Run a scenario sweep and emit its rows."""
    cfg = _load_config(config_path)
    doc = _post(server, "/sweep", {"config": cfg, "threads": threads})
    sweep_param = cfg.get("sweep", {}).get("parameter", "sweep")
    rows = [(repr(s), repr(v), q, doc["config_hash"])
            for s, q, v in doc["rows"]]
    _emit(doc, out, fmt, (["sweep_param", "value", "quantity", "config_hash"],
                          rows))
    _ = sweep_param


@main.command()
@shared_options
def report(config_path, out, fmt, threads, server):
    """Run a scenario sweep and emit the full report with fits."""
    cfg = _load_config(config_path)
    doc = _post(server, "/sweep", {"config": cfg, "threads": threads})
    rows = [(repr(s), repr(v), q, doc["config_hash"])
            for s, q, v in doc["rows"]]
    _emit(doc, out, fmt, (["sweep_param", "value", "quantity", "config_hash"],
                          rows))


if __name__ == "__main__":
    main()
