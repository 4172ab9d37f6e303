/** Detail pane: metadata, tweet links, save toggle, inline PDF viewer. */

import type { PaperDetail } from "./api.js";
import { clear, h } from "./dom.js";

export interface DetailCallbacks {
  onToggleSave(arxivId: string): void;
  onClose(): void;
}

export function renderNotFound(container: Element, arxivId: string): void {
  clear(container);
  container.append(
    h("div", { class: "detail-missing" }, h("p", {}, `Paper ${arxivId} was not found.`)),
  );
}

export function renderDetail(
  container: Element,
  detail: PaperDetail,
  saved: boolean,
  cb: DetailCallbacks,
): void {
  clear(container);

  const close = h("button", { class: "close-btn" }, "Back to list");
  close.addEventListener("click", () => cb.onClose());

  const save = h(
    "button",
    { class: saved ? "save-btn saved" : "save-btn", "data-save": detail.arxiv_id },
    saved ? "Saved" : "Save",
  );
  save.addEventListener("click", () => cb.onToggleSave(detail.arxiv_id));

  const versions = h(
    "ul",
    { class: "detail-versions" },
    ...detail.versions.map((v) =>
      h("li", {}, `v${v.version} submitted ${v.submitted_at.slice(0, 10)}`),
    ),
  );

  // the API returns mention links newest first; keep that order
  const mentions = h(
    "ul",
    { class: "detail-mentions" },
    ...detail.mentions.map((m) =>
      h(
        "li",
        {},
        h(
          "a",
          { href: m.url, target: "_blank", rel: "noopener noreferrer" },
          m.author_handle ? `@${m.author_handle}` : `tweet ${m.tweet_id}`,
        ),
        ` on ${m.timestamp.slice(0, 10)}`,
      ),
    ),
  );

  container.append(
    h("div", { class: "detail-bar" }, close, save),
    h("h2", { class: "detail-title" }, detail.title),
    h("p", { class: "detail-authors" }, detail.authors.join(", ")),
    h(
      "p",
      { class: "detail-categories" },
      ...detail.categories.map((c) => h("span", { class: "badge" }, c)),
    ),
    h("p", { class: "detail-abstract" }, detail.abstract),
    h("h4", {}, `Versions (${detail.versions.length})`),
    versions,
    h("h4", {}, `Mentions (${detail.mention_count})`),
    detail.mentions.length ? mentions : h("p", { class: "empty-note" }, "No tweets yet."),
  );
}

export function renderViewer(container: Element, pdfUrl: string): void {
  clear(container);
  // native browser PDF rendering; no custom viewer
  container.append(
    h("iframe", { class: "pdf-frame", src: pdfUrl, title: "PDF viewer" }),
    h("p", { class: "pdf-fallback" }, h("a", { href: pdfUrl, target: "_blank", rel: "noopener" }, "Open PDF")),
  );
}
