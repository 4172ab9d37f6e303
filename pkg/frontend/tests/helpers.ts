import { App, type AppEnv } from "../src/app.js";
import { PortalClient } from "../src/api.js";
import { MockApi } from "./mock_api.js";

export function memoryStorage(seed: Record<string, string> = {}) {
  const data = new Map(Object.entries(seed));
  return {
    getItem: (key: string) => data.get(key) ?? null,
    setItem: (key: string, value: string) => void data.set(key, value),
  };
}

export interface TestHarness {
  app: App;
  api: MockApi;
  root: HTMLElement;
  urls: string[];
}

export function makeApp(
  initialQuery = "",
  opts: { width?: number; api?: MockApi; user?: string } = {},
): TestHarness {
  const api = opts.api ?? new MockApi();
  const root = document.createElement("div");
  document.body.append(root);
  const urls: string[] = [];
  const env: AppEnv = {
    initialQuery,
    width: opts.width ?? 1280,
    pushUrl: (query) => urls.push(query),
    storage: memoryStorage(opts.user ? { "portal-user": opts.user } : {}),
  };
  const app = new App(root, new PortalClient("", api.fetchFn), env);
  return { app, api, root, urls };
}

export function cardTitles(root: HTMLElement): string[] {
  return [...root.querySelectorAll(".card-title")].map((el) => el.textContent ?? "");
}

export function cardIds(root: HTMLElement): string[] {
  return [...root.querySelectorAll<HTMLElement>(".card")].map((el) => el.dataset.id ?? "");
}
