import json
import logging
from typing import Any

from pydantic import BaseModel

from logbb.app_utils.config import EngineSettings


def setup_logging(level: str = "WARNING") -> None:
    """Configure root logging for CLI runs."""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


class ReportSink:
    """Writes finished reports as structured log entries.

    With cloud logging enabled (and google-cloud-logging installed) entries go
    to Cloud Logging via ``log_struct``; otherwise the JSON payload is logged
    locally on the ``logbb.report`` logger.
    """

    def __init__(self, settings: EngineSettings):
        self.local = logging.getLogger("logbb.report")
        self.cloud_logger: Any = None
        if settings.cloud_logging:
            try:
                from google.cloud import logging as google_cloud_logging
            except ImportError:
                self.local.warning(
                    "Cloud logging requested but google-cloud-logging is not installed "
                    "(pip install 'logbb[cloud]'); falling back to local logging"
                )
            else:
                logging_client = google_cloud_logging.Client()
                self.cloud_logger = logging_client.logger("logbb")

    def emit(self, report: BaseModel, ok: bool = True) -> None:
        payload = report.model_dump(mode="json")
        severity = "INFO" if ok else "WARNING"
        if self.cloud_logger is not None:
            self.cloud_logger.log_struct(payload, severity=severity)
            return
        self.local.log(
            logging.INFO if ok else logging.WARNING,
            json.dumps(payload, sort_keys=True),
        )
