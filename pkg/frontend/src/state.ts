/**
 * View state: everything the UI needs to rebuild itself, kept in lockstep
 * with the URL query string so links are shareable.
 *
 * Invariants (checked by assertValid, preserved by every transition):
 *   - split and viewer layouts require a selected paper
 *   - the mobile viewport class forbids the split layout
 *   - from/to come together as YYYY-MM-DD dates with from <= to;
 *     page >= 1; perPage in [1, 100]
 *
 * The state keeps the dates exactly as the range inputs produce them;
 * apiRange() widens them to the API's half-open RFC 3339 window.
 */

import type { SortMode } from "./api.js";

export type Layout = "list" | "split" | "viewer";
export type ViewportClass = "mobile" | "desktop";

export const MOBILE_BREAKPOINT = 768;

export const SORT_MODES: readonly SortMode[] = ["date", "twitter", "collection", "relevance"];
export const SEARCH_FIELDS = ["title", "abstract", "authors", "categories"] as const;
export type SearchField = (typeof SEARCH_FIELDS)[number];

export interface ViewState {
  q: string;
  fields: SearchField[];
  sort: SortMode;
  from?: string;
  to?: string;
  page: number;
  perPage: number;
  layout: Layout;
  selectedPaper?: string;
  viewport: ViewportClass;
}

export function defaultState(viewport: ViewportClass = "desktop"): ViewState {
  return { q: "", fields: [], sort: "date", page: 1, perPage: 20, layout: "list", viewport };
}

export function viewportClass(width: number): ViewportClass {
  return width < MOBILE_BREAKPOINT ? "mobile" : "desktop";
}

const DATE_RE = /^\d{4}-\d{2}-\d{2}$/;

export function validRange(from?: string, to?: string): boolean {
  if (from === undefined && to === undefined) return true;
  if (from === undefined || to === undefined) return false;
  return DATE_RE.test(from) && DATE_RE.test(to) && from <= to;
}

/**
 * Convert the picked dates to the API's half-open window. The end date is
 * inclusive: to=2018-07-01 means everything before July 2 midnight, and a
 * same-day range covers exactly that day.
 */
export function apiRange(from?: string, to?: string): { from?: string; to?: string } {
  if (from === undefined || to === undefined) return {};
  const dayAfter = new Date(new Date(`${to}T00:00:00Z`).getTime() + 86_400_000);
  return { from: `${from}T00:00:00Z`, to: `${dayAfter.toISOString().slice(0, 10)}T00:00:00Z` };
}

export function assertValid(state: ViewState): void {
  if ((state.layout === "split" || state.layout === "viewer") && !state.selectedPaper) {
    throw new Error(`${state.layout} layout requires a selected paper`);
  }
  if (state.viewport === "mobile" && state.layout === "split") {
    throw new Error("split layout is not available on mobile");
  }
  if (!validRange(state.from, state.to)) {
    throw new Error(`bad time span: ${state.from} .. ${state.to}`);
  }
  if (!Number.isInteger(state.page) || state.page < 1) {
    throw new Error(`bad page: ${state.page}`);
  }
  if (!Number.isInteger(state.perPage) || state.perPage < 1 || state.perPage > 100) {
    throw new Error(`bad perPage: ${state.perPage}`);
  }
}

// --- transitions (all return a fresh valid state) -------------------------

export function selectPaper(state: ViewState, arxivId: string): ViewState {
  const layout: Layout =
    state.viewport === "mobile" ? "viewer" : state.layout === "list" ? "split" : state.layout;
  const next = { ...state, selectedPaper: arxivId, layout };
  assertValid(next);
  return next;
}

export function clearSelection(state: ViewState): ViewState {
  const next: ViewState = { ...state, selectedPaper: undefined, layout: "list" };
  assertValid(next);
  return next;
}

/**
 * Advance the layout one step. Desktop cycles list, split, viewer;
 * mobile skips split. Without a selected paper every step lands on list.
 */
export function toggleLayout(state: ViewState): ViewState {
  let layout: Layout;
  if (!state.selectedPaper) {
    layout = "list";
  } else if (state.viewport === "mobile") {
    layout = state.layout === "list" ? "viewer" : "list";
  } else {
    layout = state.layout === "list" ? "split" : state.layout === "split" ? "viewer" : "list";
  }
  const next = { ...state, layout };
  assertValid(next);
  return next;
}

export function setViewport(state: ViewState, viewport: ViewportClass): ViewState {
  let layout = state.layout;
  if (viewport === "mobile" && layout === "split") layout = "viewer";
  const next = { ...state, viewport, layout };
  assertValid(next);
  return next;
}

// --- URL codec -------------------------------------------------------------
//
// encode() omits defaults; decode() restores them, so for every valid
// state s: decode(encode(s)) deep-equals s (after field canonicalization),
// and for every canonical query string u: encode(decode(u)) carries the
// same parameters as u, order aside. The viewport class is derived from
// the window, never from the URL.

function canonicalFields(fields: readonly string[]): SearchField[] {
  const wanted = new Set(fields);
  return SEARCH_FIELDS.filter((f) => wanted.has(f));
}

export function encodeViewState(state: ViewState): string {
  const qs = new URLSearchParams();
  if (state.q) qs.set("q", state.q);
  const fields = canonicalFields(state.fields);
  if (fields.length) qs.set("fields", fields.join(","));
  if (state.sort !== "date") qs.set("sort", state.sort);
  if (state.from !== undefined) qs.set("from", state.from);
  if (state.to !== undefined) qs.set("to", state.to);
  if (state.page !== 1) qs.set("page", String(state.page));
  if (state.perPage !== 20) qs.set("per_page", String(state.perPage));
  if (state.layout !== "list") qs.set("view", state.layout);
  if (state.selectedPaper) qs.set("paper", state.selectedPaper);
  return qs.toString();
}

/** Rebuild a valid state from a query string, dropping anything malformed. */
export function decodeViewState(query: string, viewport: ViewportClass): ViewState {
  const qs = new URLSearchParams(query);
  const state = defaultState(viewport);

  state.q = qs.get("q") ?? "";
  const fields = qs.get("fields");
  if (fields) state.fields = canonicalFields(fields.split(","));
  const sort = qs.get("sort");
  if (sort && (SORT_MODES as readonly string[]).includes(sort)) state.sort = sort as SortMode;

  const from = qs.get("from");
  const to = qs.get("to");
  if (from !== null && to !== null && validRange(from, to)) {
    state.from = from;
    state.to = to;
  }

  const page = Number(qs.get("page") ?? "1");
  if (Number.isInteger(page) && page >= 1) state.page = page;
  const perPage = Number(qs.get("per_page") ?? "20");
  if (Number.isInteger(perPage) && perPage >= 1 && perPage <= 100) state.perPage = perPage;

  const paper = qs.get("paper");
  if (paper) state.selectedPaper = paper;

  const view = qs.get("view");
  if ((view === "split" || view === "viewer") && state.selectedPaper) {
    state.layout = view === "split" && viewport === "mobile" ? "viewer" : view;
  }

  assertValid(state);
  return state;
}
