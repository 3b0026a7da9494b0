# =========================
# Templates de saída em texto (formato plain)
# =========================
from string import Template
from typing import Any, Dict

DEFAULT_TEMPLATES = {
    "normalize": (
        "algorithm: ${algorithm}\n"
        "M=${M} N=${N} r=${r}\n"
        "freqs: ${freqs}\n"
        "phi: ${phi}\n"
        "kl: ${kl} ${unit}\n"
        "certificate: ${certificate}\n"
        "ops: ${op_counts}"
    ),
    "normalize_pre_fixup": "pre-fixup: ${pre_fixup_freqs}",
    "normalize_fallback": "fallback taken: ${fallback_taken}",
    "check": "[${status}] ${name} (${cases} cases)",
    "check_failure": "    - ${failure}",
    "validation_footer": "validation ${status} (seed=${seed}, cases=${cases})",
}


def render_tmpl(tmpl: str, ctx: Dict[str, Any]) -> str:
    """Renderiza template com o contexto fornecido."""
    if not tmpl:
        return ""
    return Template(tmpl).safe_substitute(ctx)
