from __future__ import annotations

from fastapi import FastAPI, BackgroundTasks
from fastapi.responses import JSONResponse
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field
from typing import Any, Dict, Optional
import os
import uuid

from .adapter import prove_problem

app = FastAPI(title="lambdasup prover API", version="0.1.0")

# CORS (permissive; restrict in production)
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Simple in-memory job store; finished jobs are evicted oldest first past MAX_JOBS
JOBS: dict[str, dict] = {}
MAX_JOBS = int(os.getenv("LAMBDASUP_MAX_JOBS", "1000"))


def _evict_finished() -> None:
    finished = [job_id for job_id, job in JOBS.items() if job["status"] in ("done", "error")]
    for job_id in finished[: max(0, len(JOBS) - MAX_JOBS + 1)]:
        del JOBS[job_id]


class ProveRequest(BaseModel):
    problem: str
    mode: str = "full"
    timeout: Optional[float] = None
    proof: bool = False
    options: Dict[str, Any] = Field(default_factory=dict)


def _run(req: ProveRequest) -> dict:
    return prove_problem(req.problem, mode=req.mode, timeout=req.timeout, proof=req.proof, options=req.options)


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/prove")
def prove_endpoint(req: ProveRequest):
    try:
        return JSONResponse(_run(req))
    except Exception as e:
        return JSONResponse({"status": "error", "error": str(e)}, status_code=400)


@app.post("/jobs/prove")
async def create_job(req: ProveRequest, background_tasks: BackgroundTasks):
    job_id = str(uuid.uuid4())
    _evict_finished()
    JOBS[job_id] = {"status": "pending"}

    def _run_job(request: ProveRequest):
        JOBS[job_id] = {"status": "running"}
        try:
            JOBS[job_id] = {"status": "done", "result": _run(request)}
        except Exception as e:
            JOBS[job_id] = {"status": "error", "error": str(e)}

    background_tasks.add_task(_run_job, req)
    return {"job_id": job_id, "status": "queued"}


@app.get("/jobs/{job_id}")
def get_job(job_id: str):
    job = JOBS.get(job_id)
    if not job:
        return JSONResponse({"error": "job not found"}, status_code=404)
    return job
