"""Local HTTP service behind the viewer: parse, synthesize, dictionary.

Single tenant, no auth, meant to bind to localhost. The dictionary is
shared read-only across requests; synthesis is a pure function, so
concurrent requests are safe. Request and response bodies are exactly the
JSON formats of the owning modules.
"""

from __future__ import annotations

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from .dictionary import Dictionary, manifest_to_obj
from .errors import GestureKitError, TransportError
from .motion import clip_to_obj
from .nlu import LlmConfig, assemble_script, classify, load_lexicon
from .script import attach_timings, script_from_obj, script_to_obj, \
    segment_sentences, timings_from_obj
from .synthesis import SynthesisConfig, parse_base_spec, synthesize


def _error(status: int, exc: Exception) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": str(exc)})


def create_app(dictionary: Dictionary, mode: str = "offline",
               lexicon=None, llm_config: LlmConfig | None = None,
               cache_dir=None, transport=None,
               cors_origin: str | None = None) -> FastAPI:
    lexicon = lexicon or load_lexicon()
    app = FastAPI(title="gesturekit", docs_url=None, redoc_url=None)
    if cors_origin:
        from fastapi.middleware.cors import CORSMiddleware
        app.add_middleware(CORSMiddleware, allow_origins=[cors_origin],
                           allow_methods=["*"], allow_headers=["*"])

    @app.post("/api/parse")
    def api_parse(body: dict):
        try:
            text = body["text"]
            timings = timings_from_obj(body["timings"])
            sentences = segment_sentences(text)
            timed = attach_timings(sentences, timings)
            results = classify([t.text for t in timed], lexicon,
                               tokens=[t.tokens for t in timed], mode=mode,
                               config=llm_config, cache_dir=cache_dir,
                               transport=transport)
            script, _ = assemble_script(timed, results)
            return script_to_obj(script)
        except TransportError as exc:
            return _error(502, exc)
        except (KeyError, TypeError, ValueError, GestureKitError) as exc:
            return _error(400, exc)

    @app.post("/api/synthesize")
    def api_synthesize(body: dict):
        try:
            script = script_from_obj(body["script"])
            options = body.get("options") or {}
            config = SynthesisConfig(
                fps=float(options.get("fps", 25.0)),
                ramp_s=float(options.get("ramp_s", 0.2)),
                mode=str(options.get("mode", "onset")),
                seed=int(options.get("seed", 0)),
                min_gesture_s=float(options.get("min_gesture_s", 1.5)))
            base_spec = parse_base_spec(str(options.get("base", "rest")))
            result = synthesize(script, dictionary, base_spec, config)
            return {"motion": clip_to_obj(result.motion),
                    "schedule": result.schedule.to_obj(),
                    "report": result.report.to_obj()}
        except TransportError as exc:
            return _error(502, exc)
        except (KeyError, TypeError, ValueError, GestureKitError) as exc:
            return _error(400, exc)

    @app.get("/api/dictionary")
    def api_dictionary():
        return manifest_to_obj(dictionary)

    @app.get("/api/units/{unit_id}")
    def api_unit(unit_id: str):
        unit = dictionary.get(unit_id)
        if unit is None:
            return JSONResponse(status_code=404,
                                content={"error": f"unknown unit "
                                                  f"{unit_id!r}"})
        return clip_to_obj(unit.clip)

    return app
