"""Run the control center: python -m patrolbot.center [options]."""
from __future__ import annotations

import argparse
import asyncio
import json
import sys
from pathlib import Path

from .. import protocol
from ..worldsim import bundled_map_path
from .service import ControlCenter, start_center


def parse_args(argv=None):
    parser = argparse.ArgumentParser(prog="python -m patrolbot.center")
    parser.add_argument("--storage", default="center-data",
                        help="directory for session logs")
    parser.add_argument("--map", default="corridor_g2",
                        help="map served to consoles (bundled name or path)")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--protocol-port", type=int,
                        default=protocol.DEFAULT_PROTOCOL_PORT,
                        help="agent port (0 picks a free one)")
    parser.add_argument("--http-port", type=int,
                        default=protocol.DEFAULT_HTTP_PORT,
                        help="operator port (0 picks a free one)")
    parser.add_argument("--queue-commands", action="store_true",
                        help="queue operator commands while no agent is up")
    parser.add_argument("--no-fsync", action="store_true",
                        help="skip fsync per record (throughput over safety)")
    parser.add_argument("--print-ports", action="store_true",
                        help="print the bound ports as one JSON line")
    parser.add_argument("--console-dir", default=None,
                        help="serve a built operator console from /console")
    parser.add_argument("--retention", type=int, default=0, metavar="N",
                        help="keep at most N session logs (0 = unlimited)")
    return parser.parse_args(argv)


async def amain(args) -> None:
    map_path = Path(args.map)
    if not map_path.exists():
        map_path = bundled_map_path(args.map)
    center = ControlCenter(args.storage, map_path,
                           fsync=not args.no_fsync,
                           queue_commands=args.queue_commands,
                           retention_sessions=args.retention)
    handles = await start_center(
        center, args.host, args.protocol_port, args.http_port,
        console_dir=Path(args.console_dir) if args.console_dir else None)
    if args.print_ports:
        print(json.dumps({"protocol_port": handles.protocol_port,
                          "http_port": handles.http_port}), flush=True)
    else:
        print(f"control center up: agents on {args.host}:{handles.protocol_port}, "
              f"operators on http://{args.host}:{handles.http_port}", flush=True)
    try:
        await asyncio.Event().wait()
    finally:
        await handles.close()


def main(argv=None) -> int:
    try:
        asyncio.run(amain(parse_args(argv)))
    except KeyboardInterrupt:
        pass
    return 0


if __name__ == "__main__":
    sys.exit(main())
