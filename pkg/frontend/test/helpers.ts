import { ApiClient } from "../src/api";
import { Session } from "../src/state";
import { mountApp } from "../src/views";
import { MockApi } from "./mock";

export interface App {
  mock: MockApi;
  session: Session;
  container: HTMLElement;
}

export async function bootApp(mock: MockApi = new MockApi()): Promise<App> {
  const session = new Session(new ApiClient(mock.fetch));
  const container = document.createElement("div");
  document.body.innerHTML = "";
  document.body.appendChild(container);
  mountApp(container, session);
  await session.start();
  await session.idle();
  return { mock, session, container };
}

export function click(container: HTMLElement, selector: string): void {
  const el = container.querySelector<HTMLElement>(selector);
  if (!el) throw new Error(`no element matches ${selector}`);
  el.dispatchEvent(new MouseEvent("click", { bubbles: true }));
}

export function setChecked(
  container: HTMLElement,
  selector: string,
  checked: boolean,
): void {
  const input = container.querySelector<HTMLInputElement>(selector);
  if (!input) throw new Error(`no element matches ${selector}`);
  input.checked = checked;
  input.dispatchEvent(new Event("change", { bubbles: true }));
}

export function text(container: HTMLElement, selector: string): string {
  const el = container.querySelector<HTMLElement>(selector);
  if (!el) throw new Error(`no element matches ${selector}`);
  return (el.textContent ?? "").replace(/\s+/g, " ").trim();
}
