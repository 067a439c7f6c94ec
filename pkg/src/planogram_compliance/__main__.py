"""Entry point for the planogram-compliance command."""

import logging
import sys

import structlog
from pydantic import ValidationError

from planogram_compliance.cli import EXIT_ERROR, build_parser, run, settings_from_args
from planogram_compliance.config import LogLevel
from planogram_compliance.errors import FormatError


def configure_logging(log_level: LogLevel, log_json: bool) -> None:
    """Configure structured logging on stderr; stdout carries command output."""
    processors = [
        structlog.stdlib.filter_by_level,
        structlog.stdlib.add_logger_name,
        structlog.stdlib.add_log_level,
        structlog.stdlib.PositionalArgumentsFormatter(),
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.UnicodeDecoder(),
    ]

    if log_json:
        processors.append(structlog.processors.JSONRenderer())
    else:
        processors.append(structlog.dev.ConsoleRenderer())

    structlog.configure(
        processors=processors,
        wrapper_class=structlog.stdlib.BoundLogger,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )

    logging.basicConfig(
        format="%(message)s",
        level=getattr(logging, log_level.value),
        stream=sys.stderr,
        force=True,
    )


def main(argv: list[str] | None = None) -> None:
    """Main entry point."""
    args = build_parser().parse_args(argv)
    try:
        settings = settings_from_args(args)
    except ValidationError as e:
        fields = ", ".join(".".join(str(p) for p in err["loc"]) for err in e.errors())
        print(f"error: invalid setting: {fields}: {e.errors()[0]['msg']}", file=sys.stderr)
        sys.exit(EXIT_ERROR)
    except FormatError as e:
        print(f"error: {e}", file=sys.stderr)
        sys.exit(EXIT_ERROR)

    configure_logging(settings.log_level, settings.log_json)
    structlog.get_logger().debug("command_starting", command=args.command)
    sys.exit(run(args, settings))


if __name__ == "__main__":
    main()
