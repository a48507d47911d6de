"""Named pipeline configurations shipped with the package."""

from .catalog import DEFAULT_MANIFEST, ProfileCatalog
from .models import ProfileDoc, ProfileHit

__all__ = ["DEFAULT_MANIFEST", "ProfileCatalog", "ProfileDoc", "ProfileHit"]
