import logging
import threading
from typing import Callable, List, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field
import uvicorn

import reports
from core.config import get_config
from core.cache import ResultCache
from core.errors import DomainError, LabError
from contfrac import catalog
from periods import RAW_SIMPLEX
from quadrature import BesselProduct, moment_product

# 配置日志
logging.basicConfig(level=getattr(logging, get_config().log_level))
logger = logging.getLogger(__name__)

app = FastAPI(title="Bessel 矩实验室")

# mpmath 的工作精度是进程级状态，计算请求逐个执行
_compute_lock = threading.Lock()


class MomentRequest(BaseModel):
    product: Optional[List[int]] = Field(None, description="[p, a, b, c, d]")
    kappa: Optional[int] = None
    n: Optional[int] = None
    j: Optional[int] = None
    digits: Optional[int] = None


class DecomposeRequest(BaseModel):
    kappa: int
    n: int
    j: int


class CfEvalRequest(BaseModel):
    name: str
    depth: Optional[int] = None
    digits: Optional[int] = None


class PslqRequest(BaseModel):
    values: List[str]
    labels: Optional[List[str]] = None
    max_coeff: int = 10 ** 6
    confidence_digits: Optional[int] = None
    digits: Optional[int] = None


class PeriodRequest(BaseModel):
    n: int
    p: int = 1
    form: str = RAW_SIMPLEX
    mode: str = "auto"
    seed: int = 0
    log2_samples: Optional[int] = None
    randomizations: int = 8
    compare: bool = False
    digits: Optional[int] = None


def _digits(requested: Optional[int]) -> int:
    return requested if requested is not None else get_config().default_digits


def _compute(label: str, job: Callable[[], reports.Report]) -> reports.Report:
    """执行计算并把实验室异常映射为 HTTP 状态码"""
    try:
        with _compute_lock:
            return job()
    except DomainError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except LabError as e:
        raise HTTPException(status_code=422, detail=str(e))
    except Exception as e:
        logger.error(f"{label} 失败: {e}")
        raise HTTPException(status_code=500, detail=str(e))


@app.get("/")
async def read_index():
    return {
        "message": "Bessel 矩实验室 API 正在运行",
        "endpoints": ["/api/health", "/api/moment", "/api/decompose", "/api/catalog", "/api/cf/eval",
                      "/api/pslq", "/api/period"],
    }


@app.get("/api/health")
async def health():
    return {"status": "ok", "default_digits": get_config().default_digits}


def _cache() -> ResultCache:
    return ResultCache(get_config().cache_dir)


@app.post("/api/moment")
def compute_moment(request: MomentRequest):
    def job():
        if request.product is not None:
            if not 1 <= len(request.product) <= 5:
                raise DomainError(f"product 需要 1 到 5 个整数，收到: {request.product}")
            product = BesselProduct(*request.product)
        elif None not in (request.kappa, request.n, request.j):
            product = moment_product(request.kappa, request.n, request.j)
        else:
            raise DomainError("需要 product 或 kappa/n/j")
        return reports.moment_report(product, _digits(request.digits), _cache())

    return _compute("moment", job)


@app.post("/api/decompose")
def compute_decompose(request: DecomposeRequest):
    return _compute("decompose", lambda: reports.decompose_report(request.kappa, request.n, request.j))


@app.get("/api/catalog")
def list_catalog():
    return _compute("catalog", lambda: {"count": len(catalog()), "entries": reports.cf_list_report()["rows"]})


@app.post("/api/cf/eval")
def evaluate_cf(request: CfEvalRequest):
    return _compute("cf eval", lambda: reports.cf_eval_report(request.name, _digits(request.digits),
                                                                  request.depth, _cache()))


@app.post("/api/pslq")
def find_relation(request: PslqRequest):
    return _compute("pslq", lambda: reports.pslq_report(request.values, _digits(request.digits), request.labels,
                                                        request.max_coeff, request.confidence_digits))


@app.post("/api/period")
def compute_period(request: PeriodRequest):
    return _compute("period", lambda: reports.period_report(
        request.n, request.p, request.form, _digits(request.digits), request.mode, request.compare,
        request.log2_samples, request.seed, request.randomizations, _cache()))


if __name__ == "__main__":
    uvicorn.run("web_app:app", host="0.0.0.0", port=8000, reload=True)
