import type {
  DragRequest,
  DragResponse,
  ErrorBody,
  FieldError,
  PreviewRequest,
  PreviewResponse,
  SampleResponse,
} from "./wire.js";

/** Non-2xx service reply, carrying the structured error body. */
export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly fields: FieldError[] = [],
  ) {
    super(message);
    this.name = "ServiceError";
  }

  /** One line per offending field, ready for an inline error list. */
  inlineMessages(): string[] {
    if (this.fields.length === 0) return [this.message];
    return this.fields.map((f) => `${f.loc.join(".")}: ${f.msg}`);
  }
}

/** The request was superseded by a newer one; not an error to show. */
export class RequestCancelled extends Error {
  constructor() {
    super("request superseded");
    this.name = "RequestCancelled";
  }
}

export interface ApiResult<T> {
  data: T;
  /** Exact response text — exports must stay byte-identical to this. */
  rawText: string;
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class DesignerApi {
  private inflightPreview: AbortController | null = null;

  constructor(
    private readonly baseUrl: string = "http://127.0.0.1:8731",
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async post<T>(
    path: string,
    body: unknown,
    signal?: AbortSignal,
  ): Promise<ApiResult<T>> {
    let resp: Response;
    try {
      resp = await this.fetchImpl(this.baseUrl + path, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
        signal,
      });
    } catch (err) {
      if (err instanceof Error && err.name === "AbortError") {
        throw new RequestCancelled();
      }
      throw err;
    }
    const rawText = await resp.text();
    if (!resp.ok) {
      let code = "http_error";
      let message = `HTTP ${resp.status}`;
      let fields: FieldError[] = [];
      try {
        const parsed = JSON.parse(rawText) as ErrorBody;
        code = parsed.error.code;
        message = parsed.error.message;
        fields = parsed.error.fields ?? [];
      } catch {
        // non-JSON error body; keep the generic message
      }
      throw new ServiceError(resp.status, code, message, fields);
    }
    return { data: JSON.parse(rawText) as T, rawText };
  }

  /** At most one preview in flight; a new submission cancels the old one. */
  preview(body: PreviewRequest): Promise<ApiResult<PreviewResponse>> {
    this.inflightPreview?.abort();
    const controller = new AbortController();
    this.inflightPreview = controller;
    return this.post<PreviewResponse>(
      "/v1/trajectory/preview",
      body,
      controller.signal,
    ).finally(() => {
      if (this.inflightPreview === controller) this.inflightPreview = null;
    });
  }

  sampleSpec(seed: number): Promise<ApiResult<SampleResponse>> {
    return this.post<SampleResponse>("/v1/trajectory/sample", { seed });
  }

  sampleDrag(body: DragRequest): Promise<ApiResult<DragResponse>> {
    return this.post<DragResponse>("/v1/drag/sample", body);
  }

  async health(): Promise<boolean> {
    try {
      const resp = await this.fetchImpl(this.baseUrl + "/v1/health");
      return resp.ok;
    } catch {
      return false;
    }
  }
}
