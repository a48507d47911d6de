import logging
from pathlib import Path

import jinja2
import yaml

logger = logging.getLogger(__name__)

DEFAULT_TEMPLATES = Path(__file__).with_name("templates.yaml")


class TemplateManager:
    """Named jinja2 text templates kept in one YAML mapping.

    ``section`` selects a nested mapping with dot notation (``"text"`` or
    ``"text.extra"``). Every template in it is compiled when the manager is
    created, so a broken template fails at load time instead of mid-run.
    """

    def __init__(self, file_path: str | Path = DEFAULT_TEMPLATES, section: str | None = None) -> None:
        file_path = Path(file_path)
        try:
            document = yaml.safe_load(file_path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise FileNotFoundError(f"Template file not found: {file_path}") from None
        except yaml.YAMLError as exc:
            raise ValueError(f"Failed to parse template file {file_path}: {exc}") from exc

        for key in section.split(".") if section else ():
            if not isinstance(document, dict) or key not in document:
                raise ValueError(f"Section '{section}' not found in {file_path}")
            document = document[key]
        if not isinstance(document, dict):
            raise ValueError(f"Section '{section or '<root>'}' of {file_path} is not a mapping")

        sources = {name: body for name, body in document.items() if isinstance(body, str)}
        self._environment = jinja2.Environment(
            loader=jinja2.DictLoader(sources),
            undefined=jinja2.StrictUndefined,
            keep_trailing_newline=True,
            trim_blocks=True,
            lstrip_blocks=True,
        )
        self._compiled = {name: self._environment.get_template(name) for name in sources}
        logger.debug("Loaded %d templates from %s", len(self._compiled), file_path)

    @property
    def names(self) -> list[str]:
        return sorted(self._compiled)

    def has_template(self, name: str) -> bool:
        return name in self._compiled

    def render(self, name: str, /, **context) -> str:
        template = self._compiled.get(name)
        if template is None:
            raise ValueError(f"Template '{name}' not found; available: {', '.join(self.names)}")
        return template.render(**context)
