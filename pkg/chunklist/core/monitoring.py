"""
Monitoring & Observability Module
Sends benchmark cell events to LogFire when configured, otherwise to the logger
"""
import logging
from datetime import datetime
from typing import Any, Dict

from chunklist.core.config import settings

logger = logging.getLogger(__name__)

# Initialize LogFire if API key is available
logfire = None

try:
    import logfire as logfire_module

    if settings.logfire_api_key and settings.enable_monitoring:
        logfire_module.configure(token=settings.logfire_api_key)
        logfire = logfire_module
        logger.info("LogFire initialized successfully")
    else:
        logger.debug("LogFire API key not configured")
except ImportError:
    logger.debug("LogFire not installed")
except Exception as e:
    logger.warning(f"LogFire initialization failed: {e}")


class BenchEventLogger:
    """Logs benchmark cell results to LogFire (or the stdlib logger)"""

    @staticmethod
    def log_cell(row: Any) -> None:
        """
        Log one finished benchmark cell

        Args:
            row: BenchRow with timings for a (structure, n, chunk size, operation) cell
        """
        event_data: Dict[str, Any] = {
            "structure": row.structure,
            "n": row.n,
            "chunk_size": row.chunk_size,
            "operation": row.operation,
            "median_ns": row.median_ns,
            "min_ns": row.min_ns,
            "max_ns": row.max_ns,
            "speedup": round(row.speedup, 2),
            "timestamp": datetime.now().isoformat(),
        }

        if not logfire:
            logger.info(
                f"{row.structure} n={row.n} chunk_size={row.chunk_size} "
                f"{row.operation}: median {row.median_ns}ns (speedup {row.speedup:.2f}x)"
            )
            return

        try:
            logfire.info("bench_cell", **event_data)
        except Exception as e:
            logger.error(f"Failed to log bench cell: {e}")


def initialize_monitoring() -> Dict[str, bool]:
    """Report which monitoring sinks are active"""
    monitoring_status = {
        "logfire": bool(logfire and settings.logfire_api_key),
        "enabled": settings.enable_monitoring,
    }

    logger.info(f"LogFire: {'Enabled' if monitoring_status['logfire'] else 'Disabled'}")
    logger.info(f"Monitoring: {'Enabled' if monitoring_status['enabled'] else 'Disabled'}")

    return monitoring_status
