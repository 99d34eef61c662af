#!/usr/bin/env python3
"""genlogic: exact probabilistic reasoning over data with classical logic as a limit case."""
import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional

from core.errors import GenLogicError
from core.use_cases.query_service import EXIT_INPUT_ERROR, CommandResult, QueryRequest
from infrastructure import get_container, setup_logging

logger = logging.getLogger("genlogic")


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _add_table_arguments(parser: argparse.ArgumentParser, data_required: bool = False):
    parser.add_argument("--vocab", required=True, help="vocabulary JSON file")
    parser.add_argument("--data", required=data_required, help="0/1 CSV data file")
    parser.add_argument("--prior", help="mle, uniform, or a prior JSON file (default: mle with --data)")


def _add_given(parser: argparse.ArgumentParser):
    parser.add_argument("--given", action="append", default=[], metavar="FORMULA",
                        help="condition formula; repeat for a multiset")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="genlogic", description=__doc__)
    parser.add_argument("--config", help="YAML or JSON settings file")
    parser.add_argument("--verbose", action="store_true", help="debug logging on stderr")
    parser.add_argument("--json", action="store_true", help="indented JSON output")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    query = sub.add_parser("query", help="p(query | given) under a semantics")
    _add_table_arguments(query)
    _add_given(query)
    query.add_argument("--sem", default="strict", help="strict, limit or mu=N/D")
    query.add_argument("query")

    marginal = sub.add_parser("marginal", help="p(query) under the prior")
    _add_table_arguments(marginal)
    marginal.add_argument("query")

    update = sub.add_parser("update", help="marginal before and after one more datum")
    _add_table_arguments(update, data_required=True)
    update.add_argument("--row", required=True, help="bit string or name=0|1 pairs")
    update.add_argument("--write", action="store_true", help="append the row to the data file")
    update.add_argument("query")

    entail = sub.add_parser("entail", help="classical entailment and consistency")
    entail.add_argument("--vocab", required=True)
    _add_given(entail)
    entail.add_argument("query")

    mcs = sub.add_parser("mcs", help="maximal consistent subsets of the given formulae")
    mcs.add_argument("--vocab", required=True)
    mcs.add_argument("--data")
    mcs.add_argument("--prior")
    _add_given(mcs)
    mcs.add_argument("--by", choices=["cardinality", "inclusion"], default="cardinality")

    posterior = sub.add_parser("posterior", help="p(model | given) for every supported model")
    _add_table_arguments(posterior)
    _add_given(posterior)
    posterior.add_argument("--sem", default="strict")

    check = sub.add_parser("check", help="randomized check of engine against oracle")
    check.add_argument("--trials", type=_positive_int)
    check.add_argument("--seed", type=int)
    return parser


def _request(args: argparse.Namespace) -> QueryRequest:
    return QueryRequest(
        vocab_path=args.vocab,
        query=getattr(args, "query", None),
        given=tuple(getattr(args, "given", ())),
        semantics=getattr(args, "sem", "strict"),
        data_path=getattr(args, "data", None),
        prior=getattr(args, "prior", None),
    )


def dispatch(args: argparse.Namespace, container) -> CommandResult:
    service = container.get_query_service()
    command = args.command

    if command == "check":
        settings = container.config.get_check_config()
        trials = args.trials if args.trials is not None else settings.trials
        seed = args.seed if args.seed is not None else settings.seed
        return service.check(
            trials, seed, runner=container.get_trial_runner(),
            max_atoms=settings.max_atoms, max_depth=settings.max_depth,
            max_delta=settings.max_delta,
        )

    request = _request(args)
    if command == "query":
        return service.query(request)
    if command == "marginal":
        return service.marginal(request)
    if command == "update":
        return service.update(request, args.row, write=args.write)
    if command == "entail":
        return service.entail(request)
    if command == "mcs":
        return service.mcs(request, by=args.by)
    if command == "posterior":
        return service.posterior(request)
    raise UsageError(f"Unknown command {command!r}")


def render(payload: Dict[str, Any], indent: bool) -> str:
    return json.dumps(payload, sort_keys=True, indent=2 if indent else None)


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_INPUT_ERROR

    try:
        container = get_container(args.config)
        log_settings = container.config.get_logging_config()
        setup_logging(logging.DEBUG if args.verbose else log_settings.level, log_settings.format)
        result = dispatch(args, container)
    except (GenLogicError, UsageError, OSError, json.JSONDecodeError) as e:
        logger.debug("Command failed", exc_info=True)
        print(f"genlogic: error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    print(render(result.payload, args.json))
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
