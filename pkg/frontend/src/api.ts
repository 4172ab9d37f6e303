/** Typed client for the portal JSON API. */

export type SortMode = "date" | "twitter" | "collection" | "relevance";

export interface SearchHit {
  arxiv_id: string;
  title: string;
  authors: string[];
  categories: string[];
  abstract: string;
  latest_date: string;
  sort_key: number | string;
  mention_count: number;
  collection_count: number;
  relevance_score: number;
  thumbnail_url?: string;
}

export interface SearchPage {
  hits: SearchHit[];
  page: number;
  per_page: number;
  total: number;
}

export interface PaperVersion {
  version: number;
  submitted_at: string;
}

export interface MentionLink {
  tweet_id: string;
  arxiv_id: string;
  timestamp: string;
  url: string;
  author_handle?: string;
}

export interface PaperDetail {
  arxiv_id: string;
  title: string;
  authors: string[];
  categories: string[];
  abstract: string;
  latest_date: string;
  versions: PaperVersion[];
  mentions: MentionLink[];
  mention_count: number;
  collection_count: number;
  pdf_url: string;
  thumbnail_url?: string;
}

export interface CollectionEntry {
  arxiv_id: string;
  added_at: string;
}

export interface CollectionPage {
  user_id: string;
  entries: CollectionEntry[];
}

export interface MutationResult {
  user_id: string;
  arxiv_id: string;
  result: "added" | "already_present" | "removed";
  collection_count: number;
}

export interface SearchParams {
  q?: string;
  fields?: string[];
  sort?: SortMode;
  from?: string;
  to?: string;
  page?: number;
  perPage?: number;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

async function asJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let code = "http_error";
    let message = `${response.status}`;
    try {
      const body = (await response.json()) as { code?: string; message?: string };
      if (body.code) code = body.code;
      if (body.message) message = body.message;
    } catch {
      // non-JSON error body; keep the status line
    }
    throw new ApiError(response.status, code, message);
  }
  return (await response.json()) as T;
}

export function searchQueryString(params: SearchParams): string {
  const qs = new URLSearchParams();
  if (params.q) qs.set("q", params.q);
  if (params.fields && params.fields.length) qs.set("fields", params.fields.join(","));
  if (params.sort && params.sort !== "date") qs.set("sort", params.sort);
  if (params.from !== undefined) qs.set("from", params.from);
  if (params.to !== undefined) qs.set("to", params.to);
  if (params.page !== undefined && params.page !== 1) qs.set("page", String(params.page));
  if (params.perPage !== undefined) qs.set("per_page", String(params.perPage));
  return qs.toString();
}

export class PortalClient {
  constructor(
    private baseUrl = "",
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  async search(params: SearchParams, signal?: AbortSignal): Promise<SearchPage> {
    const qs = searchQueryString(params);
    const url = `${this.baseUrl}/api/search${qs ? `?${qs}` : ""}`;
    return asJson<SearchPage>(await this.fetchFn(url, { signal }));
  }

  async paper(arxivId: string): Promise<PaperDetail> {
    return asJson<PaperDetail>(await this.fetchFn(`${this.baseUrl}/api/papers/${arxivId}`));
  }

  async collection(userId: string): Promise<CollectionPage> {
    return asJson<CollectionPage>(
      await this.fetchFn(`${this.baseUrl}/api/users/${encodeURIComponent(userId)}/collection`),
    );
  }

  async addToCollection(userId: string, arxivId: string): Promise<MutationResult> {
    return asJson<MutationResult>(
      await this.fetchFn(
        `${this.baseUrl}/api/users/${encodeURIComponent(userId)}/collection/${arxivId}`,
        { method: "PUT" },
      ),
    );
  }

  async removeFromCollection(userId: string, arxivId: string): Promise<MutationResult> {
    return asJson<MutationResult>(
      await this.fetchFn(
        `${this.baseUrl}/api/users/${encodeURIComponent(userId)}/collection/${arxivId}`,
        { method: "DELETE" },
      ),
    );
  }
}

/**
 * Serializes searches so at most one request is in flight; starting a new
 * one aborts the previous. The superseded call resolves to null rather
 * than rejecting, so callers can simply ignore it.
 */
export class SearchRunner {
  private controller: AbortController | null = null;

  constructor(private client: PortalClient) {}

  async run(params: SearchParams): Promise<SearchPage | null> {
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    try {
      return await this.client.search(params, controller.signal);
    } catch (err) {
      if (controller.signal.aborted) return null;
      throw err;
    } finally {
      if (this.controller === controller) this.controller = null;
    }
  }
}
