"""Loading of domain description files."""

import json
import logging
from pathlib import Path
from typing import Union

from ..exceptions import DomainError
from ..models.domain import DomainRef, Ellipse, Harmonic, SupportDomain
from .geometry import certified_radius_bound, validate_convex

logger = logging.getLogger(__name__)


class DomainLoader:
    """Handles parsing of domain JSON documents.

    Accepted schemas:
        {"type": "ellipse", "a": 2.0, "b": 1.0}
        {"type": "support_fourier", "a0": 1.0,
         "harmonics": [{"k": 2, "cos": 0.01, "sin": 0.0}]}
    """

    def load(self, path: Union[str, Path]) -> DomainRef:
        """Load and validate a domain from a JSON file."""
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8-sig"))
        except OSError as e:
            raise DomainError(f"cannot read domain file {path}: {e}") from e
        except json.JSONDecodeError as e:
            raise DomainError(f"domain file {path} is not valid JSON: {e}") from e

        domain = self.parse(data)
        logger.info(f"Loaded {type(domain).__name__} from {path.name}")
        return domain

    def parse(self, data: dict) -> DomainRef:
        """Build a domain from an already decoded JSON object."""
        if not isinstance(data, dict):
            raise DomainError("domain description must be a JSON object")
        kind = str(data.get("type", "")).strip().lower()

        try:
            if kind == "ellipse":
                domain = Ellipse.from_axes(float(data["a"]), float(data["b"]))
            elif kind == "support_fourier":
                harmonics = [
                    Harmonic(
                        k=int(item["k"]),
                        cos=float(item.get("cos", 0.0)),
                        sin=float(item.get("sin", 0.0)),
                    )
                    for item in data.get("harmonics", [])
                ]
                domain = SupportDomain(a0=float(data["a0"]), harmonics=tuple(harmonics))
            else:
                raise DomainError(f"unknown domain type '{kind}'")
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, DomainError):
                raise
            raise DomainError(f"malformed domain description: {e}") from e

        bound = certified_radius_bound(domain)
        if bound > 0:
            logger.debug(f"radius of curvature certified >= {bound:.6g}, skipping the scan")
            return domain

        report = validate_convex(domain)
        if not report.ok:
            raise DomainError(
                f"domain is not strictly convex: radius of curvature {report.min_radius:.6g} "
                f"at psi={report.location:.6g}"
            )
        return domain
