/** Options page: paste/import trust-root PEM certificates. */

import { parsePemCertificates } from "./trust";
import { loadTrustRootsPem, saveTrustRootsPem } from "./trust";

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

function describe(pemText: string): string {
  try {
    const count = parsePemCertificates(pemText).length;
    return count === 1 ? "1 trust root configured" : `${count} trust roots configured`;
  } catch (err) {
    return `could not parse PEM: ${err}`;
  }
}

async function init(): Promise<void> {
  const textarea = byId<HTMLTextAreaElement>("roots");
  const status = byId<HTMLElement>("status");
  textarea.value = await loadTrustRootsPem();
  status.textContent = describe(textarea.value);

  byId<HTMLButtonElement>("save").addEventListener("click", async () => {
    await saveTrustRootsPem(textarea.value);
    status.textContent = `saved; ${describe(textarea.value)}`;
  });

  byId<HTMLInputElement>("file").addEventListener("change", async (event) => {
    const input = event.target as HTMLInputElement;
    for (const file of Array.from(input.files ?? [])) {
      textarea.value += (textarea.value.endsWith("\n") || !textarea.value ? "" : "\n") +
        (await file.text());
    }
    status.textContent = describe(textarea.value);
  });
}

void init();
