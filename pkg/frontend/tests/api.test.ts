import { describe, expect, it } from "vitest";

import { ApiError, PortalClient, SearchRunner, searchQueryString } from "../src/api.js";
import { MockApi } from "./mock_api.js";

describe("searchQueryString", () => {
  it("omits defaults entirely", () => {
    expect(searchQueryString({})).toBe("");
    expect(searchQueryString({ q: "", sort: "date", page: 1 })).toBe("");
  });

  it("serializes every non-default parameter", () => {
    const qs = searchQueryString({
      q: "deep ranking",
      fields: ["title", "abstract"],
      sort: "twitter",
      from: "2017-01-01T00:00:00Z",
      to: "2018-01-01T00:00:00Z",
      page: 3,
      perPage: 50,
    });
    const params = new URLSearchParams(qs);
    expect(params.get("q")).toBe("deep ranking");
    expect(params.get("fields")).toBe("title,abstract");
    expect(params.get("sort")).toBe("twitter");
    expect(params.get("from")).toBe("2017-01-01T00:00:00Z");
    expect(params.get("page")).toBe("3");
    expect(params.get("per_page")).toBe("50");
  });
});

describe("PortalClient", () => {
  it("surfaces API error bodies as typed errors", async () => {
    const api = new MockApi();
    const client = new PortalClient("", api.fetchFn);
    const err = await client.paper("1712.99999").catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(404);
    expect((err as ApiError).code).toBe("unknown_paper");
  });

  it("fetches search pages and detail through the documented routes", async () => {
    const api = new MockApi();
    const client = new PortalClient("", api.fetchFn);
    const page = await client.search({ perPage: 5 });
    expect(page.hits).toHaveLength(5);
    expect(page.total).toBe(24);
    const detail = await client.paper(page.hits[0]!.arxiv_id);
    expect(detail.pdf_url).toContain(page.hits[0]!.arxiv_id);
    expect(api.requestLog[0]).toContain("/api/search?per_page=5");
  });
});

describe("SearchRunner", () => {
  it("lets a newer search cancel the one in flight", async () => {
    const api = new MockApi();
    api.manualSearch = true;
    const runner = new SearchRunner(new PortalClient("", api.fetchFn));

    const first = runner.run({ q: "sparse" });
    const second = runner.run({ q: "ranking" });
    expect(api.pendingSearchCount).toBe(2);

    api.releaseSearch(); // resolves the aborted first request; runner drops it
    api.releaseSearch();
    expect(await first).toBeNull();
    const result = await second;
    expect(result).not.toBeNull();
    expect(result!.hits.length).toBeGreaterThan(0);
  });

  it("propagates genuine failures instead of swallowing them", async () => {
    const api = new MockApi();
    api.failNextSearch = true;
    const runner = new SearchRunner(new PortalClient("", api.fetchFn));
    await expect(runner.run({})).rejects.toBeInstanceOf(ApiError);
  });

  it("runs sequential searches normally", async () => {
    const api = new MockApi();
    const runner = new SearchRunner(new PortalClient("", api.fetchFn));
    const a = await runner.run({ page: 1 });
    const b = await runner.run({ page: 2 });
    expect(a!.page).toBe(1);
    expect(b!.page).toBe(2);
  });
});
