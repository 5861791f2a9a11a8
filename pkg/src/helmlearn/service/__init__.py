"""HTTP service wrapping the core library.

Pydantic request/response models live in `models`; the FastAPI application
and its in-memory operator registry live in `app`.
"""
