from .client import (HttpTransport, IntentResult, LlmConfig, ReplayCache,
                     assemble_script, classify)
from .lexicon import Lexicon, classify_offline, load_lexicon
from .prompts import (DEFAULT_TEMPLATE, PromptTemplate, build_prompt,
                      parse_llm_response)

__all__ = [
    "HttpTransport", "IntentResult", "LlmConfig", "ReplayCache",
    "assemble_script", "classify",
    "Lexicon", "classify_offline", "load_lexicon",
    "DEFAULT_TEMPLATE", "PromptTemplate", "build_prompt",
    "parse_llm_response",
]
