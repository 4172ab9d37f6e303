/**
 * Controller tying state, API client, and panes together.
 *
 * Environment handles (URL, viewport width, storage) are injected so the
 * whole app can run against a mocked API under a DOM emulator.
 */

import { ApiError, PortalClient, SearchRunner } from "./api.js";
import type { PaperDetail, SearchPage, SearchParams } from "./api.js";
import { renderResults } from "./cards.js";
import { renderDetail, renderNotFound, renderViewer } from "./detail.js";
import { clear, h } from "./dom.js";
import {
  apiRange,
  assertValid,
  clearSelection,
  decodeViewState,
  defaultState,
  encodeViewState,
  selectPaper,
  setViewport,
  toggleLayout,
  validRange,
  viewportClass,
} from "./state.js";
import type { SearchField, ViewState } from "./state.js";
import type { SortMode } from "./api.js";

export interface AppEnv {
  initialQuery: string;
  width: number;
  pushUrl(query: string): void;
  storage: Pick<Storage, "getItem" | "setItem">;
}

export function browserEnv(): AppEnv {
  return {
    initialQuery: window.location.search.replace(/^\?/, ""),
    width: window.innerWidth,
    pushUrl(query) {
      const url = query ? `?${query}` : window.location.pathname;
      window.history.replaceState(null, "", url);
    },
    storage: window.localStorage,
  };
}

export function userToken(storage: Pick<Storage, "getItem" | "setItem">): string {
  const existing = storage.getItem("portal-user");
  if (existing) return existing;
  const token = `u-${Math.random().toString(36).slice(2, 12)}`;
  storage.setItem("portal-user", token);
  return token;
}

export class App {
  state: ViewState;
  results: SearchPage | null = null;
  detail: PaperDetail | null = null;
  savedIds = new Set<string>();
  readonly userId: string;

  private runner: SearchRunner;
  private pendingSaves = new Set<string>();
  private listPane!: HTMLElement;
  private detailPane!: HTMLElement;
  private viewerPane!: HTMLElement;
  private banner!: HTMLElement;
  private pager!: HTMLElement;
  private searchInput!: HTMLInputElement;
  private fromInput!: HTMLInputElement;
  private toInput!: HTMLInputElement;

  constructor(
    private root: HTMLElement,
    private client: PortalClient,
    private env: AppEnv,
  ) {
    this.runner = new SearchRunner(client);
    this.userId = userToken(env.storage);
    this.state = decodeViewState(env.initialQuery, viewportClass(env.width));
    this.buildSkeleton();
  }

  /** Initial search plus saved-state load; safe to call exactly once. */
  async init(): Promise<void> {
    try {
      const collection = await this.client.collection(this.userId);
      this.savedIds = new Set(collection.entries.map((e) => e.arxiv_id));
    } catch {
      // collection is a convenience; search still works without it
    }
    await this.runSearch();
    if (this.state.selectedPaper) await this.openPaper(this.state.selectedPaper, { keepLayout: true });
  }

  // --- state plumbing ------------------------------------------------

  private apply(next: ViewState): void {
    assertValid(next);
    this.state = next;
    this.env.pushUrl(encodeViewState(next));
    this.renderChrome();
  }

  private searchParams(): SearchParams {
    const s = this.state;
    return {
      q: s.q,
      fields: s.fields,
      sort: s.sort,
      ...apiRange(s.from, s.to),
      page: s.page,
      perPage: s.perPage,
    };
  }

  async runSearch(): Promise<void> {
    let page: SearchPage | null;
    try {
      page = await this.runner.run(this.searchParams());
    } catch (err) {
      this.showBanner(err instanceof ApiError ? err.message : "Search failed; showing previous results.");
      return;
    }
    if (page === null) return; // superseded by a newer query
    this.results = page;
    this.hideBanner();
    this.renderList();
  }

  async setQuery(q: string): Promise<void> {
    this.apply({ ...this.state, q, page: 1 });
    await this.runSearch();
  }

  async setSort(sort: SortMode): Promise<void> {
    this.apply({ ...this.state, sort, page: 1 });
    await this.runSearch();
  }

  async setFields(fields: SearchField[]): Promise<void> {
    this.apply({ ...this.state, fields, page: 1 });
    await this.runSearch();
  }

  /** Set the date window (YYYY-MM-DD, end inclusive) or clear it. */
  async setRange(from?: string, to?: string): Promise<void> {
    if (!validRange(from, to)) {
      this.showBanner(
        from === undefined || to === undefined
          ? "Pick both ends of the time span."
          : "Time span is reversed.",
      );
      return;
    }
    this.apply({ ...this.state, from, to, page: 1 });
    await this.runSearch();
  }

  async setPage(page: number): Promise<void> {
    if (page < 1) return;
    this.apply({ ...this.state, page });
    await this.runSearch();
  }

  onResize(width: number): void {
    const vp = viewportClass(width);
    if (vp !== this.state.viewport) this.apply(setViewport(this.state, vp));
  }

  toggleLayout(): void {
    this.apply(toggleLayout(this.state));
  }

  closeDetail(): void {
    this.detail = null;
    this.apply(clearSelection(this.state));
  }

  async openPaper(arxivId: string, opts: { keepLayout?: boolean } = {}): Promise<void> {
    this.apply(opts.keepLayout ? { ...this.state, selectedPaper: arxivId } : selectPaper(this.state, arxivId));
    try {
      this.detail = await this.client.paper(arxivId);
    } catch (err) {
      this.detail = null;
      if (err instanceof ApiError && err.status === 404) {
        renderNotFound(this.detailPane, arxivId);
        clear(this.viewerPane);
        return;
      }
      this.showBanner("Could not load the paper.");
      return;
    }
    this.renderDetailPane();
  }

  async toggleSave(arxivId: string): Promise<void> {
    if (this.pendingSaves.has(arxivId)) return; // one mutation per paper at a time
    const wasSaved = this.savedIds.has(arxivId);
    this.pendingSaves.add(arxivId);
    this.flipSaved(arxivId, !wasSaved);
    try {
      if (wasSaved) await this.client.removeFromCollection(this.userId, arxivId);
      else await this.client.addToCollection(this.userId, arxivId);
    } catch {
      this.flipSaved(arxivId, wasSaved);
      this.showBanner("Could not update your collection.");
    } finally {
      this.pendingSaves.delete(arxivId);
    }
  }

  private flipSaved(arxivId: string, saved: boolean): void {
    if (saved) this.savedIds.add(arxivId);
    else this.savedIds.delete(arxivId);
    for (const btn of this.root.querySelectorAll<HTMLElement>(`[data-save="${arxivId}"]`)) {
      btn.className = saved ? "save-btn saved" : "save-btn";
      btn.textContent = saved ? "Saved" : "Save";
    }
  }

  // --- rendering -----------------------------------------------------

  private buildSkeleton(): void {
    clear(this.root);
    this.root.append(this.buildControls());

    this.banner = h("div", { class: "banner", role: "alert" });
    this.listPane = h("section", { class: "pane list-pane" }, h("div", { class: "results" }));
    this.detailPane = h("section", { class: "pane detail-pane" });
    this.viewerPane = h("section", { class: "pane viewer-pane" });
    this.pager = h("nav", { class: "pager" });

    this.root.append(
      this.banner,
      h("main", { class: "panes" }, this.listPane, this.detailPane, this.viewerPane),
      this.pager,
    );
    this.renderChrome();
  }

  private buildControls(): HTMLElement {
    this.searchInput = h("input", {
      class: "search-input",
      type: "search",
      name: "q",
      placeholder: "Search pre-prints",
      value: this.state.q,
    }) as HTMLInputElement;
    const form = h("form", { class: "search-form" }, this.searchInput, h("button", { type: "submit" }, "Search"));
    form.addEventListener("submit", (ev) => {
      ev.preventDefault();
      void this.setQuery(this.searchInput.value);
    });

    const tabs = h(
      "nav",
      { class: "sort-tabs" },
      ...(["date", "twitter", "collection", "relevance"] as const).map((mode) => {
        const tab = h("button", { class: "sort-tab", "data-sort": mode }, mode);
        tab.addEventListener("click", () => void this.setSort(mode));
        return tab;
      }),
    );

    this.fromInput = h("input", { class: "range-from", type: "date" }) as HTMLInputElement;
    this.toInput = h("input", { class: "range-to", type: "date" }) as HTMLInputElement;
    if (this.state.from) this.fromInput.value = this.state.from;
    if (this.state.to) this.toInput.value = this.state.to;
    const applyRange = h("button", { class: "range-apply" }, "Apply");
    applyRange.addEventListener("click", () => {
      void this.setRange(this.fromInput.value || undefined, this.toInput.value || undefined);
    });

    const layoutToggle = h("button", { class: "layout-toggle" }, "Layout");
    layoutToggle.addEventListener("click", () => this.toggleLayout());

    return h(
      "header",
      { class: "controls" },
      form,
      tabs,
      h("span", { class: "range-controls" }, this.fromInput, this.toInput, applyRange),
      layoutToggle,
    );
  }

  private renderChrome(): void {
    this.root.className = `portal layout-${this.state.layout} ${this.state.viewport}`;
    for (const tab of this.root.querySelectorAll<HTMLElement>(".sort-tab")) {
      tab.classList.toggle("active", tab.dataset.sort === this.state.sort);
    }
  }

  private renderList(): void {
    if (!this.results) return;
    const container = this.listPane.querySelector(".results");
    if (!container) return;
    renderResults(container, this.results, this.savedIds, {
      onSelect: (id) => void this.openPaper(id),
      onToggleSave: (id) => void this.toggleSave(id),
    });
    this.renderPager();
  }

  private renderPager(): void {
    clear(this.pager);
    if (!this.results) return;
    const { page, per_page, total } = this.results;
    const lastPage = Math.max(1, Math.ceil(total / per_page));
    const prev = h("button", { class: "pager-prev" }, "Previous");
    const next = h("button", { class: "pager-next" }, "Next");
    if (page <= 1) prev.setAttribute("disabled", "");
    if (page >= lastPage) next.setAttribute("disabled", "");
    prev.addEventListener("click", () => void this.setPage(page - 1));
    next.addEventListener("click", () => void this.setPage(page + 1));
    this.pager.append(prev, h("span", { class: "pager-label" }, `${page} / ${lastPage}`), next);
  }

  private renderDetailPane(): void {
    if (!this.detail) return;
    renderDetail(this.detailPane, this.detail, this.savedIds.has(this.detail.arxiv_id), {
      onToggleSave: (id) => void this.toggleSave(id),
      onClose: () => this.closeDetail(),
    });
    renderViewer(this.viewerPane, this.detail.pdf_url);
  }

  private showBanner(message: string): void {
    this.banner.textContent = message;
    this.banner.classList.add("visible");
  }

  private hideBanner(): void {
    this.banner.textContent = "";
    this.banner.classList.remove("visible");
  }
}

export function mount(root: HTMLElement, baseUrl = ""): App {
  const app = new App(root, new PortalClient(baseUrl), browserEnv());
  window.addEventListener("resize", () => app.onResize(window.innerWidth));
  void app.init();
  return app;
}
