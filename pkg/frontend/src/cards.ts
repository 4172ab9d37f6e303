/** Result list rendering: one card per hit. */

import type { SearchHit, SearchPage } from "./api.js";
import { clear, h } from "./dom.js";

export interface CardCallbacks {
  onSelect(arxivId: string): void;
  onToggleSave(arxivId: string): void;
}

function sortKeyLabel(hit: SearchHit): string {
  if (typeof hit.sort_key === "number") return String(hit.sort_key);
  return hit.sort_key.slice(0, 10);
}

export function renderCard(hit: SearchHit, saved: boolean, cb: CardCallbacks): HTMLElement {
  const card = h("article", { class: "card", "data-id": hit.arxiv_id });

  if (hit.thumbnail_url) {
    const img = h("img", {
      class: "card-thumb",
      src: hit.thumbnail_url,
      alt: "",
      loading: "lazy",
    }) as HTMLImageElement;
    const region = h("div", { class: "card-thumb-region" }, img);
    // a strip can disappear server-side; drop the whole region on 404
    img.addEventListener("error", () => region.remove());
    card.append(region);
  }

  const title = h("h3", { class: "card-title" }, hit.title);
  title.addEventListener("click", () => cb.onSelect(hit.arxiv_id));

  const badges = h(
    "span",
    { class: "card-categories" },
    ...hit.categories.map((c) => h("span", { class: "badge" }, c)),
  );

  const save = h(
    "button",
    { class: saved ? "save-btn saved" : "save-btn", "data-save": hit.arxiv_id },
    saved ? "Saved" : "Save",
  );
  save.addEventListener("click", (ev) => {
    ev.stopPropagation();
    cb.onToggleSave(hit.arxiv_id);
  });

  card.append(
    title,
    h("p", { class: "card-authors" }, hit.authors.join(", ")),
    badges,
    h("p", { class: "card-abstract" }, hit.abstract),
    h("div", { class: "card-meta" }, h("span", { class: "card-sort-key" }, sortKeyLabel(hit)), save),
  );
  return card;
}

export function renderResults(
  container: Element,
  page: SearchPage,
  savedIds: ReadonlySet<string>,
  cb: CardCallbacks,
): void {
  clear(container);
  if (!page.hits.length) {
    container.append(h("p", { class: "empty-note" }, "No results."));
    return;
  }
  for (const hit of page.hits) {
    container.append(renderCard(hit, savedIds.has(hit.arxiv_id), cb));
  }
  const shownBefore = (page.page - 1) * page.per_page;
  container.append(
    h(
      "p",
      { class: "result-count" },
      `${shownBefore + 1}-${shownBefore + page.hits.length} of ${page.total}`,
    ),
  );
}
