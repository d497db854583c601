#!/usr/bin/env python3
"""
G∼ Workbench Command Line
Usage: python -m src.cli <build|classify|prove|embed|soundness|bridge> [options]

Exit codes: 0 success or valid, 1 countermodel or refuted property,
2 input or precondition error.
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from . import commands
from .config import get_config, load_config, set_config
from .errors import InvalidInputError, WorkbenchError

logger = logging.getLogger("gsim.cli")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gsim", description="Finite monadic G∼-algebra workbench")
    parser.add_argument('--config', help="JSON configuration file")
    parser.add_argument('--format', choices=('json', 'text'), help="output format")
    parser.add_argument('--workers', type=int, help="worker processes for the consequence search")
    parser.add_argument('--seed', type=int, help="seed for randomized checks")
    sub = parser.add_subparsers(dest='command', required=True)

    build = sub.add_parser('build', help="build a product of chains with quantifiers")
    build.add_argument('--chains', required=True, help="comma-separated chain sizes, e.g. 3,3")
    build.add_argument('--range', dest='range_spec', default='diagonal',
                       help="diagonal | bounds | indices:<list>")
    build.add_argument('--functional', type=int, metavar='M', help="functional algebra C_n^M instead")
    build.add_argument('--power', type=int, metavar='N', help="barred N-th power of the built algebra")
    build.add_argument('--output', '-o', help="write the algebra JSON here")

    classify = sub.add_parser('classify', help="s.i. and CMG∼ classification")
    classify.add_argument('file')

    prove = sub.add_parser('prove', help="bounded consequence check")
    prove.add_argument('query', nargs='?', help="query file: premises, then '|- goal'")
    prove.add_argument('--premises', action='append', default=[], help="premise formula (repeatable)")
    prove.add_argument('--goal', help="goal formula")
    prove.add_argument('--max-size', type=int)
    prove.add_argument('--semantics', choices=('algebra', 'kripke', 'both'), default='algebra')
    prove.add_argument('--kripke-worlds', type=int)
    prove.add_argument('--kripke-chain', type=int)

    embed = sub.add_parser('embed', help="fixed-point or functional embedding")
    embed.add_argument('file')
    embed.add_argument('--mode', choices=('fixed-point', 'functional'), default='fixed-point')
    embed.add_argument('--sample', type=int, help="sequence coordinates to check")
    embed.add_argument('--output', '-o', help="write the report JSON here")

    soundness = sub.add_parser('soundness', help="check every axiom and rule")
    soundness.add_argument('file')

    bridge = sub.add_parser('bridge', help="random Kripke/algebra agreement check")
    bridge.add_argument('--samples', type=int, default=200)
    bridge.add_argument('--max-depth', type=int, default=4)
    bridge.add_argument('--max-vars', type=int, default=3)
    bridge.add_argument('--max-worlds', type=int, default=4)
    bridge.add_argument('--max-chain', type=int, default=5)
    return parser


def render(payload: Dict[str, Any], fmt: str) -> str:
    if fmt == 'json':
        return json.dumps(payload, sort_keys=True, indent=2)
    lines = []
    for key in sorted(payload):
        value = payload[key]
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True)
        lines.append(f"{key}: {value}")
    return "\n".join(lines)


def _write(path: str, data: Dict[str, Any]) -> None:
    target = Path(path)
    target.write_text(json.dumps(data, sort_keys=True, indent=2) + "\n")
    logger.info(f"Wrote {target}")


def dispatch(args: argparse.Namespace) -> commands.Result:
    config = get_config()
    if args.command == 'build':
        code, payload = commands.build(commands.parse_chain_list(args.chains), args.range_spec,
                                       args.functional, args.power)
        if code == 0 and args.output:
            _write(args.output, payload['algebra'])
            payload = {'summary': payload['summary'], 'output': args.output}
        return code, payload
    if args.command == 'classify':
        return commands.classify(args.file)
    if args.command == 'prove':
        query_text = None
        if args.query:
            try:
                query_text = Path(args.query).read_text()
            except OSError as e:
                raise InvalidInputError(f"cannot read query file {args.query}: {e}")
        return commands.prove(args.goal, args.premises, query_text, args.max_size, args.semantics,
                              args.kripke_worlds, args.kripke_chain, config.workers)
    if args.command == 'embed':
        code, payload = commands.embed(args.file, args.mode, args.sample)
        if code != 2 and args.output:
            _write(args.output, payload)
            payload = {'verified': code == 0, 'output': args.output}
        return code, payload
    if args.command == 'soundness':
        return commands.soundness(args.file)
    if args.command == 'bridge':
        return commands.bridge(args.samples, config.seed, args.max_depth, args.max_vars,
                               args.max_worlds, args.max_chain)
    raise InvalidInputError(f"unknown command {args.command!r}")


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(
        level=os.getenv('GSIM_LOG_LEVEL', 'WARNING').upper(),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr
    )
    args = build_parser().parse_args(argv)
    fmt = args.format or 'json'
    try:
        config = set_config(load_config(args.config, output_format=args.format,
                                        workers=args.workers, seed=args.seed))
        fmt = config.output_format
        code, payload = dispatch(args)
    except WorkbenchError as e:
        logger.error(f"{args.command} failed: {e.message}")
        code, payload = 2, e.to_dict()
    print(render(payload, fmt))
    return code


if __name__ == "__main__":
    sys.exit(main())
