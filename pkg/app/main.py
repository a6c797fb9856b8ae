import logging
import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from app.cli.parser import build_parser
from app.common.errors import EXIT_INPUT, EXIT_NUMERICAL, AuditError
from app.common.log_utils import configure_logging
from app.common.tracing import trace_run
from app.config import config
from app.files.results import ResultKind, write_result

logger = logging.getLogger(__name__)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    configure_logging(config.log_config, args.log_level or config.log_level)

    with trace_run(args.command, getattr(args, "seed", None)):
        logger.info("Running %s", args.command)
        try:
            doc = args.handler(args)
            # written only once the whole computation has succeeded
            write_result(doc, args.out)
        except AuditError as e:
            logger.error("%s failed: %s", args.command, e)
            return e.exit_code
        except ValidationError as e:
            logger.error("%s rejected its inputs: %s", args.command, e)
            return EXIT_INPUT
        except OSError as e:
            logger.error("%s could not read or write a file: %s", args.command, e)
            return EXIT_INPUT
        except Exception:
            logger.exception("%s failed unexpectedly", args.command)
            return EXIT_NUMERICAL

        if doc.kind is ResultKind.VALIDATION and not doc.validation_report.passed:
            failed = [c.name for c in doc.validation_report.checks if not c.passed]
            logger.error("Validation failed: %s", ", ".join(failed))
            return EXIT_NUMERICAL
        logger.info("%s complete", args.command)
    return 0


if __name__ == "__main__":
    sys.exit(main())
